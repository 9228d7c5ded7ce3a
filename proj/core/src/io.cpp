#include "cobs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cobs/error.hpp"
#include "cobs/random.hpp"

namespace cobs {
namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("field '") + key + "': " + e.what());
  }
}

json range_json(const IntRange& r) { return json::array({r.lo, r.hi}); }

IntRange range_from(const json& j, IntRange fallback) {
  if (j.is_null()) return fallback;
  if (j.is_number_integer()) return {j.get<int>(), j.get<int>()};
  if (!j.is_array() || j.size() != 2) throw InvalidInput("integer range must be [lo, hi]");
  return {j[0].get<int>(), j[1].get<int>()};
}

std::uint64_t parse_hex(const std::string& s) {
  try {
    return std::stoull(s, nullptr, 16);
  } catch (const std::exception&) {
    throw InvalidInput("bad hash '" + s + "'");
  }
}

}  // namespace

json to_json(const Provenance& p) {
  struct Visitor {
    json operator()(const KMeansParams& k) const {
      return {{"algorithm", "kmeans"}, {"K", k.k}, {"seed", k.seed}};
    }
    json operator()(const DbscanParams& d) const {
      return {{"algorithm", "dbscan"}, {"eps", d.eps}, {"min_pts", d.min_pts}};
    }
    json operator()(const SpectralParams& s) const {
      json j = {{"algorithm", "spectral"}, {"K", s.k}, {"seed", s.seed}};
      if (const auto* knn = std::get_if<KnnGraph>(&s.graph)) {
        j["graph"] = "knn";
        j["knn"] = knn->k;
      } else {
        j["graph"] = "gaussian";
        j["sigma"] = std::get<GaussianGraph>(s.graph).sigma;
      }
      return j;
    }
  };
  return std::visit(Visitor{}, p);
}

Provenance provenance_from_json(const json& j) {
  const auto algorithm = field<std::string>(j, "algorithm");
  if (algorithm == "kmeans") return KMeansParams{field<int>(j, "K"), field<std::uint64_t>(j, "seed")};
  if (algorithm == "dbscan") return DbscanParams{field<double>(j, "eps"), field<int>(j, "min_pts")};
  if (algorithm == "spectral") {
    const auto graph = field<std::string>(j, "graph");
    AffinityGraph g;
    if (graph == "knn") {
      g = KnnGraph{field<int>(j, "knn")};
    } else if (graph == "gaussian") {
      g = GaussianGraph{field<double>(j, "sigma")};
    } else {
      throw InvalidInput("unknown affinity graph '" + graph + "'");
    }
    return SpectralParams{field<int>(j, "K"), g, field<std::uint64_t>(j, "seed")};
  }
  throw InvalidInput("unknown algorithm '" + algorithm + "'");
}

json to_json(const Clustering& c) {
  return {{"provenance", to_json(c.provenance)}, {"assignment", c.assignment}};
}

Clustering clustering_from_json(const json& j) {
  return {field<std::vector<Label>>(j, "assignment"), provenance_from_json(field<json>(j, "provenance"))};
}

json to_json(const ClusteringEnsemble& e) {
  json clusterings = json::array();
  for (const auto& c : e.clusterings) clusterings.push_back(to_json(c));
  json skipped = json::array();
  for (const auto& s : e.skipped) skipped.push_back({{"provenance", to_json(s.provenance)}, {"reason", s.reason}});
  return {{"dataset", {{"name", e.dataset_name}, {"hash", to_hex(e.dataset_hash)}}},
          {"clusterings", std::move(clusterings)},
          {"skipped", std::move(skipped)}};
}

ClusteringEnsemble ensemble_from_json(const json& j) {
  ClusteringEnsemble e;
  const auto dataset = field<json>(j, "dataset");
  e.dataset_name = field<std::string>(dataset, "name");
  e.dataset_hash = parse_hex(field<std::string>(dataset, "hash"));
  for (const auto& c : field<json>(j, "clusterings")) e.clusterings.push_back(clustering_from_json(c));
  if (j.contains("skipped")) {
    for (const auto& s : j.at("skipped")) {
      e.skipped.push_back({provenance_from_json(field<json>(s, "provenance")), field<std::string>(s, "reason")});
    }
  }
  if (!e.clusterings.empty()) {
    const auto n = e.clusterings.front().size();
    for (const auto& c : e.clusterings) {
      if (c.size() != n) throw InvalidInput("ensemble clusterings differ in length");
    }
  }
  e.reset_weights();
  return e;
}

json to_json(const ConstraintSet& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back({{"i", c.pair.i}, {"j", c.pair.j}, {"kind", to_string(c.kind)}});
  return out;
}

ConstraintSet constraints_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("constraints must be a JSON array");
  ConstraintSet cs;
  for (const auto& item : j) {
    cs.add(Pair(field<std::size_t>(item, "i"), field<std::size_t>(item, "j")),
           parse_constraint_kind(field<std::string>(item, "kind")));
  }
  return cs;
}

json to_json(const HyperGrid& g) {
  json j = json::object();
  if (g.kmeans) j["kmeans"] = {{"K", range_json(g.kmeans->k)}, {"seeds", g.kmeans->seeds}};
  if (g.dbscan) j["dbscan"] = {{"eps_count", g.dbscan->eps_count}, {"min_pts", range_json(g.dbscan->min_pts)}};
  if (g.spectral) {
    json s = {{"K", range_json(g.spectral->k)}};
    // a disabled graph family is written as null, since an absent key means the default
    s["knn"] = g.spectral->knn ? range_json(*g.spectral->knn) : json();
    s["sigma"] = g.spectral->sigma ? json{{"lo", g.spectral->sigma->lo},
                                          {"hi", g.spectral->sigma->hi},
                                          {"count", g.spectral->sigma->count}}
                                   : json();
    j["spectral"] = std::move(s);
  }
  return j;
}

HyperGrid grid_from_json(const json& j) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "default")) return HyperGrid::defaults();
  if (!j.is_object()) throw InvalidInput("grid must be \"default\" or an object");
  HyperGrid g{std::nullopt, std::nullopt, std::nullopt};
  try {
    if (j.contains("kmeans")) {
      const auto& k = j.at("kmeans");
      KMeansGrid kg;
      kg.k = range_from(k.value("K", json()), kg.k);
      kg.seeds = k.value("seeds", kg.seeds);
      g.kmeans = kg;
    }
    if (j.contains("dbscan")) {
      const auto& d = j.at("dbscan");
      DbscanGrid dg;
      dg.eps_count = d.value("eps_count", dg.eps_count);
      dg.min_pts = range_from(d.value("min_pts", json()), dg.min_pts);
      g.dbscan = dg;
    }
    if (j.contains("spectral")) {
      const auto& s = j.at("spectral");
      SpectralGrid sg;
      sg.k = range_from(s.value("K", json()), sg.k);
      if (s.contains("knn")) {
        sg.knn = s.at("knn").is_null() ? std::nullopt : std::optional(range_from(s.at("knn"), *sg.knn));
      }
      if (s.contains("sigma")) {
        const auto& sig = s.at("sigma");
        if (sig.is_null()) {
          sg.sigma.reset();
        } else {
          sg.sigma = LinSpace{sig.value("lo", 0.01), sig.value("hi", 5.0), sig.value("count", 20)};
        }
      }
      g.spectral = sg;
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad grid: ") + e.what());
  }
  return g;
}

json to_json(const ResultTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"dataset", r.dataset},
                    {"method", r.method},
                    {"constraints", r.constraints},
                    {"mean_ari", r.mean_ari},
                    {"std_ari", r.std_ari},
                    {"mean_best_ari", r.mean_best_ari},
                    {"per_run", r.per_run},
                    {"histogram", {{"kmeans", r.histogram[0]}, {"dbscan", r.histogram[1]}, {"spectral", r.histogram[2]}}}});
  }
  return {{"rows", std::move(rows)}};
}

std::string to_csv(const ResultTable& t) {
  std::ostringstream out;
  out << "dataset,method,constraints,mean_ari,std_ari,mean_best_ari,runs,kmeans,dbscan,spectral\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const auto& r : t.rows) {
    out << r.dataset << ',' << r.method << ',' << r.constraints << ',' << num(r.mean_ari) << ','
        << num(r.std_ari) << ',' << num(r.mean_best_ari) << ',' << r.per_run.size() << ','
        << r.histogram[0] << ',' << r.histogram[1] << ',' << r.histogram[2] << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j, int indent) {
  write_text_file(path, j.dump(indent) + "\n");
}

}  // namespace cobs
