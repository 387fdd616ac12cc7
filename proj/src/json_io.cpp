#include "sring/json_io.hpp"

#include <fstream>
#include <set>

#include "sring/group_ring.hpp"
#include "sring/perm.hpp"

namespace sring {

Json sring_to_json(const SchurPartition& p) {
  Json j;
  j["group"] = p.group().spec_string();
  j["blocks"] = p.blocks();
  return j;
}

SchurPartition sring_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("blocks"))
    throw input_error("S-ring JSON must be an object with 'group' and 'blocks'");
  GroupSpec g = GroupSpec::parse(j["group"].get<std::string>());
  std::vector<std::vector<int>> blocks;
  if (!j["blocks"].is_array()) throw input_error("'blocks' must be an array of rank arrays");
  for (const auto& b : j["blocks"]) {
    if (!b.is_array()) throw input_error("'blocks' must be an array of rank arrays");
    std::vector<int> blk;
    for (const auto& x : b) {
      if (!x.is_number_integer()) throw input_error("block entries must be integers");
      blk.push_back(x.get<int>());
    }
    blocks.push_back(std::move(blk));
  }
  try {
    return SchurPartition(g, std::move(blocks));
  } catch (const std::invalid_argument& e) {
    throw input_error(std::string("malformed partition: ") + e.what());
  }
}

SchurPartition sring_from_string(const std::string& s) {
  Json j;
  try {
    j = Json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("JSON parse error: ") + e.what());
  }
  return sring_from_json(j);
}

SchurPartition sring_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sring_from_string(content);
}

Json verdict_to_json(const SchurPartition& p, const CiVerdict& v) {
  Json j;
  j["partition"] = sring_to_json(p);
  j["verdict"] = v.ci ? "CI" : "not-CI";
  j["method"] = v.method;
  j["aut_order"] = v.aut_order;
  if (v.regular_subgroup_count >= 0) j["regular_subgroup_count"] = v.regular_subgroup_count;
  Json conj = Json::array();
  for (const auto& e : v.conjugators) {
    Json entry;
    entry["subgroup_gens"] = e.subgroup_gens;
    entry["conjugator"] = e.conjugator;
    conj.push_back(std::move(entry));
  }
  j["conjugators"] = std::move(conj);
  if (v.refusal) {
    Json r;
    r["subgroup_gens"] = v.refusal->subgroup_gens;
    r["exhausted"] = v.refusal->exhausted;
    r["brute_confirmed"] = v.refusal->brute_confirmed;
    j["refusal"] = std::move(r);
  }
  return j;
}

Json validity_to_json(const SchurPartition& p, const ValidityReport& r) {
  Json j;
  j["group"] = p.group().spec_string();
  j["rank"] = p.rank();
  j["valid"] = r.ok;
  if (!r.ok) {
    j["violated_axiom"] = r.violated_axiom;
    j["witness"] = r.witness;
  }
  return j;
}

Json decompose_to_json(const SchurPartition& p, int q) {
  Json j;
  j["group"] = p.group().spec_string();
  j["q"] = q;
  auto [p1, q1] = p1_q1(p, q);
  j["p1"] = p1.members;
  j["q1"] = q1.members;
  j["primitive"] = is_primitive(p);

  Json gw = Json::array();
  for (const auto& c : detect_gwreath(p)) {
    Json e;
    e["l"] = c.l.members;
    e["u"] = c.u.members;
    e["trivial"] = c.trivial;
    gw.push_back(std::move(e));
  }
  j["gwreath"] = std::move(gw);

  auto star = detect_star_scan(p, q);
  if (star) {
    Json s;
    s["k"] = star->k.members;
    s["l"] = star->l.members;
    Json fs = Json::array();
    for (const auto& f : star->factorizations) {
      Json fe;
      fe["block"] = p.blocks()[f.block];
      fe["r"] = f.r;
      fe["s"] = f.s;
      fs.push_back(std::move(fe));
    }
    s["factorizations"] = std::move(fs);
    j["star"] = std::move(s);
  } else {
    j["star"] = nullptr;
  }

  Json tri = Json::array();
  auto mq = mq_automorphisms(p.group(), q);
  for (const auto& t : p.blocks()) {
    std::vector<int> ts = t;
    std::sort(ts.begin(), ts.end());
    bool invariant = true;
    for (const auto& m : mq) {
      std::vector<int> img;
      for (int x : ts) img.push_back(m.images[x]);
      std::sort(img.begin(), img.end());
      if (img != ts) {
        invariant = false;
        break;
      }
    }
    if (!invariant) continue;
    auto r = trichotomy_classify(p, q, ts);
    Json e;
    e["block"] = ts;
    e["case"] = std::string(1, r.tag);
    e["s1"] = r.s1;
    e["s_minus1"] = r.sm1;
    e["s0"] = r.s0;
    if (r.refutation) e["refutation"] = *r.refutation;
    tri.push_back(std::move(e));
  }
  j["trichotomy"] = std::move(tri);
  return j;
}

Json theorem_report_to_json(const TheoremReport& r) {
  Json j;
  j["p"] = r.p;
  j["q"] = r.q;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["branches"] = r.branch_histogram;
  j["refutations"] = r.refutations;
  bool all_ci = true;
  Json recs = Json::array();
  for (const auto& rec : r.records) {
    Json e;
    e["index"] = rec.index;
    e["colors"] = rec.connection_sets.size();
    e["connection_sets"] = rec.connection_sets;
    e["partition_rank"] = rec.partition_rank;
    e["partition"] = rec.partition_key;
    e["branch"] = rec.branch;
    if (!rec.fallback_reason.empty()) e["fallback_reason"] = rec.fallback_reason;
    if (!rec.catalog_label.empty()) e["catalog_label"] = rec.catalog_label;
    e["babai_ci"] = rec.babai_ci;
    e["babai_method"] = rec.babai_method;
    if (rec.branch_applied) e["branch_ci"] = rec.branch_ci;
    recs.push_back(std::move(e));
    all_ci = all_ci && rec.babai_ci;
  }
  j["all_ci"] = all_ci;
  j["clean"] = r.clean();
  j["records"] = std::move(recs);
  return j;
}

Json classify_to_json(const GroupSpec& h, const ClassifyOptions& opts) {
  Json j;
  j["group"] = h.spec_string();
  auto srings = enumerate_srings(h, opts.enum_limits);
  j["count"] = srings.size();

  bool is_cp3 = false;
  int p = 0;
  if (h.factors().size() == 3 && h.factors()[0] == h.factors()[1] &&
      h.factors()[1] == h.factors()[2] && is_prime_small(h.factors()[0])) {
    is_cp3 = true;
    p = h.factors()[0];
  }
  std::vector<CatalogEntry> catalog;
  if (opts.with_catalog && is_cp3 && (p == 2 || p == 3)) catalog = build_catalog(p);

  Json list = Json::array();
  for (const auto& s : srings) {
    Json e;
    e["blocks"] = s.blocks();
    e["rank"] = s.rank();
    if (opts.with_schurian) e["schurian"] = schurian_check(s, opts.ci_limits);
    if (!catalog.empty()) {
      if (p > 0) e["p_sring"] = s.is_p_sring(p);
      auto label = match_catalog(s, catalog);
      e["catalog"] = label ? Json(*label) : Json(nullptr);
    }
    list.push_back(std::move(e));
  }
  j["srings"] = std::move(list);
  if (!catalog.empty()) {
    Json cat = Json::array();
    for (const auto& e : catalog) {
      Json c;
      c["label"] = e.label;
      c["blocks"] = e.partition.blocks();
      cat.push_back(std::move(c));
    }
    j["catalog"] = std::move(cat);
  }
  return j;
}

Json non_ci_report_to_json(const NonCiSearchReport& r) {
  Json j;
  j["group"] = r.group.spec_string();
  j["classes_examined"] = r.classes_examined;
  j["witness_found"] = r.found;
  if (r.found) {
    j["witness_connection_set"] = r.witness_set;
    j["witness_partition"] = r.witness_partition_key;
    j["witness_verdict"] = r.witness_verdict.ci ? "CI" : "not-CI";
    if (r.witness_verdict.refusal) {
      j["refusal_exhausted"] = r.witness_verdict.refusal->exhausted;
      j["refusal_brute_confirmed"] = r.witness_verdict.refusal->brute_confirmed;
    }
  }
  return j;
}

std::string dump_deterministic(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sring
