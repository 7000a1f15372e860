#include <json.hpp>

#include "engelnq/pcp.hpp"

namespace engelnq {

using nlohmann::json;

// Sparse vectors are serialized as arrays of [generator, "coefficient"]
// pairs in ascending generator order; coefficients travel as decimal strings
// so arbitrary-precision values survive the round trip.
static json sparse_to_json(const SparseVec& v) {
  json out = json::array();
  for (const auto& [g, c] : v) out.push_back(json::array({g, c.get_str()}));
  return out;
}

static SparseVec sparse_from_json(const json& j) {
  SparseVec out;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2)
      throw InputError("pcp json: malformed sparse entry");
    out.emplace_back(entry[0].get<int>(),
                     Int(entry[1].get<std::string>()));
  }
  return out;
}

std::string pcp_to_json(const PcPresentation& p,
                        const std::map<std::string, ExponentVector>* images) {
  json j;
  j["n"] = p.n;
  json weights = json::array();
  json orders = json::array();
  for (int i = 1; i <= p.n; ++i) {
    weights.push_back(p.weight[i]);
    orders.push_back(p.rel_order[i].get_str());
  }
  j["weights"] = weights;
  j["rel_orders"] = orders;

  json powers = json::object();
  for (int i = 1; i <= p.n; ++i)
    if (!p.power_tail[i].empty())
      powers[std::to_string(i)] = sparse_to_json(p.power_tail[i]);
  j["power_tails"] = powers;

  json comms = json::object();
  for (int jj = 1; jj <= p.n; ++jj)
    for (int i = 1; i < jj; ++i)
      if (!p.comm[jj][i].empty())
        comms[std::to_string(jj) + "," + std::to_string(i)] =
            sparse_to_json(p.comm[jj][i]);
  j["comm_tails"] = comms;

  json defs = json::array();
  for (int i = 1; i <= p.n; ++i) {
    json d;
    switch (p.definition[i].kind) {
      case DefKind::None:
        d["kind"] = "none";
        break;
      case DefKind::Power:
        d["kind"] = "power";
        d["base"] = p.definition[i].a;
        break;
      case DefKind::Commutator:
        d["kind"] = "commutator";
        d["j"] = p.definition[i].a;
        d["i"] = p.definition[i].b;
        break;
    }
    defs.push_back(d);
  }
  j["definitions"] = defs;

  if (images) {
    json im = json::object();
    for (const auto& [name, vec] : *images)
      im[name] = sparse_to_json(to_sparse(vec.e));
    j["images"] = im;
  }
  return j.dump();
}

static PcpWithImages pcp_from_json_impl(const json& j);

PcpWithImages pcp_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("pcp json: parse failed: ") + e.what());
  }
  try {
    return pcp_from_json_impl(j);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("pcp json: malformed document: ") + e.what());
  }
}

static PcpWithImages pcp_from_json_impl(const json& j) {
  PcpWithImages out;
  PcPresentation& p = out.p;
  if (!j.contains("n")) throw InputError("pcp json: missing field 'n'");
  p.resize(j["n"].get<int>());
  const json& weights = j.at("weights");
  const json& orders = j.at("rel_orders");
  if (static_cast<int>(weights.size()) != p.n ||
      static_cast<int>(orders.size()) != p.n)
    throw InputError("pcp json: weights/rel_orders length mismatch");
  for (int i = 1; i <= p.n; ++i) {
    p.weight[i] = weights[i - 1].get<int>();
    p.rel_order[i] = Int(orders[i - 1].get<std::string>());
  }
  for (const auto& [key, val] : j.at("power_tails").items()) {
    int i = std::stoi(key);
    if (i < 1 || i > p.n) throw InputError("pcp json: bad power tail index");
    p.power_tail[i] = sparse_from_json(val);
  }
  for (const auto& [key, val] : j.at("comm_tails").items()) {
    auto comma = key.find(',');
    if (comma == std::string::npos)
      throw InputError("pcp json: bad comm tail key '" + key + "'");
    int jj = std::stoi(key.substr(0, comma));
    int i = std::stoi(key.substr(comma + 1));
    p.comm_tail_mut(jj, i) = sparse_from_json(val);
  }
  const json& defs = j.at("definitions");
  if (static_cast<int>(defs.size()) != p.n)
    throw InputError("pcp json: definitions length mismatch");
  for (int i = 1; i <= p.n; ++i) {
    const json& d = defs[i - 1];
    std::string kind = d.at("kind").get<std::string>();
    if (kind == "none") {
      p.definition[i] = Definition{};
    } else if (kind == "power") {
      p.definition[i] = Definition{DefKind::Power, d.at("base").get<int>(), 0};
    } else if (kind == "commutator") {
      p.definition[i] = Definition{DefKind::Commutator, d.at("j").get<int>(),
                                   d.at("i").get<int>()};
    } else {
      throw InputError("pcp json: unknown definition kind '" + kind + "'");
    }
  }
  p.validate();
  if (j.contains("images")) {
    for (const auto& [name, val] : j.at("images").items()) {
      ExponentVector v = identity_element(p);
      for (const auto& [g, c] : sparse_from_json(val)) {
        if (g < 1 || g > p.n) throw InputError("pcp json: bad image support");
        v.e[g] = c;
      }
      out.images[name] = std::move(v);
    }
  }
  return out;
}

}  // namespace engelnq
