// Python bindings. Structured results cross the boundary as JSON text; the
// package's __init__ decodes them.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "mbkg/corpus_io.hpp"
#include "mbkg/entity_refine.hpp"
#include "mbkg/hdbscan.hpp"
#include "mbkg/kg_emit.hpp"
#include "mbkg/metrics.hpp"
#include "mbkg/pipeline.hpp"
#include "mbkg/relation_cluster.hpp"
#include "mbkg/turtle.hpp"
#include "mbkg/umap.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

mbkg::Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  mbkg::Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  if (a.size()) std::copy(a.data(), a.data() + a.size(), m.row(0));
  return m;
}

Array to_array(const mbkg::Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

mbkg::PipelineConfig config_from(const std::string& path, const std::string& out_dir) {
  auto cfg = mbkg::load_pipeline_config(path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reified knowledge graphs from parsed micro-blogging posts";

  py::register_exception<mbkg::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<mbkg::InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<mbkg::ServiceError>(m, "ServiceError", PyExc_RuntimeError);
  py::register_exception<mbkg::TurtleError>(m, "TurtleError", PyExc_ValueError);
  py::register_exception<mbkg::UndefinedStatistic>(m, "UndefinedStatistic", PyExc_ArithmeticError);

  m.def("levenshtein_similarity", &mbkg::levenshtein_similarity, py::arg("a"), py::arg("b"));
  m.def(
      "dedup",
      [](const std::vector<std::pair<std::string, std::string>>& posts, double threshold) {
        std::vector<mbkg::RawPost> raw;
        for (const auto& [id, text] : posts) raw.push_back({id, text, {}, {}});
        std::vector<std::string> kept;
        for (const auto& p : mbkg::dedup_corpus(raw, {}, threshold)) kept.push_back(p.id);
        return kept;
      },
      py::arg("posts"), py::arg("threshold") = 0.85, "Ids of the posts kept, given (id, text) pairs.");

  m.def("normalize_tag", &mbkg::normalize_tag, py::arg("surface"));
  m.def(
      "clean_entity", [](const std::string& s) { return mbkg::clean_entity(s); }, py::arg("surface"));
  m.def("british_spelling", &mbkg::british_spelling, py::arg("word"));
  m.def(
      "mint_entity_uri", [](const std::string& key, const std::string& base) { return mbkg::mint_entity_uri(key, base); },
      py::arg("key"), py::arg("base") = mbkg::Namespaces{}.resource);

  m.def(
      "silhouette_mean",
      [](const Array& points, const std::vector<int>& labels) {
        const auto s = mbkg::silhouette_mean(to_matrix(points), labels);
        return py::make_tuple(s.value, s.defined);
      },
      py::arg("points"), py::arg("labels"));
  m.def(
      "standardize", [](const Array& points) { return to_array(mbkg::standardize(to_matrix(points))); },
      py::arg("points"));
  m.def(
      "umap",
      [](const Array& points, int n_neighbors, double min_dist, int target_dim, std::uint64_t seed) {
        mbkg::UmapParams p;
        p.n_neighbors = n_neighbors;
        p.min_dist = min_dist;
        p.target_dim = target_dim;
        p.seed = seed;
        const auto x = to_matrix(points);
        mbkg::Matrix y;
        {
          py::gil_scoped_release release;
          y = mbkg::umap_embed(x, p);
        }
        return to_array(y);
      },
      py::arg("points"), py::arg("n_neighbors") = 15, py::arg("min_dist") = 0.1, py::arg("target_dim") = 2,
      py::arg("seed") = 0);
  m.def(
      "hdbscan",
      [](const Array& points, int min_cluster_size, int min_samples) {
        return mbkg::hdbscan(to_matrix(points), {min_cluster_size, min_samples}).labels;
      },
      py::arg("points"), py::arg("min_cluster_size") = 5, py::arg("min_samples") = 5);

  m.def("fleiss_kappa", &mbkg::fleiss_kappa, py::arg("counts"));
  m.def("cohen_kappa", &mbkg::cohen_kappa, py::arg("a"), py::arg("b"));

  m.def(
      "_validate_graph", [](const std::string& path) { return json(mbkg::validate_graph(std::filesystem::path(path))).dump(); },
      py::arg("path"));
  m.def(
      "parse_turtle",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& t : mbkg::parse_turtle(text).triples) out.push_back(mbkg::to_ntriples(t));
        return out;
      },
      py::arg("text"), "N-Triples lines for every triple in a Turtle document.");

  m.def(
      "_stage",
      [](const std::string& stage, const std::string& config, const std::string& out_dir) {
        const auto cfg = config_from(config, out_dir);
        py::gil_scoped_release release;
        if (stage == "normalize") return json(mbkg::stage_normalize(cfg)).dump();
        if (stage == "extract") return json(mbkg::stage_extract(cfg)).dump();
        if (stage == "refine-emit") return json(mbkg::stage_refine_emit(cfg)).dump();
        throw mbkg::InputError("unknown stage " + stage);
      },
      py::arg("stage"), py::arg("config"), py::arg("out_dir") = "");
  m.def(
      "_extract_conllu",
      [](const std::string& conllu) {
        std::istringstream in(conllu);
        json out = json::array();
        for (const auto& [post, sentences] : mbkg::read_conllu(in)) {
          for (const auto& t : mbkg::extract_post(sentences, {}).triples) out.push_back(t);
        }
        return out.dump();
      },
      py::arg("conllu"));
}
