#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "wmh/baselines.hpp"
#include "wmh/error.hpp"
#include "wmh/estimate.hpp"
#include "wmh/redgreen.hpp"
#include "wmh/sketch.hpp"
#include "wmh/sketcher.hpp"
#include "wmh/vectors.hpp"

namespace py = pybind11;
using namespace wmh;

namespace {

SparseVector make_vector(const std::vector<std::pair<Index, double>>& items, std::size_t dim) {
    std::vector<Entry> entries;
    entries.reserve(items.size());
    for (const auto& [i, w] : items) entries.push_back({i, w});
    return SparseVector(std::move(entries), dim);
}

std::vector<std::pair<Index, double>> vector_items(const SparseVector& x) {
    std::vector<std::pair<Index, double>> out;
    out.reserve(x.nnz());
    for (const auto& e : x.entries()) out.emplace_back(e.index, e.weight);
    return out;
}

Sketch sketch_vector(const SparseVector& x, std::uint32_t k, std::uint64_t seed, const std::string& scheme,
                     const RedGreenLayout* layout, double delta) {
    Scheme s = parse_scheme(scheme);
    if (s == Scheme::RedGreen && layout == nullptr) throw UsageError("the redgreen scheme needs a layout");
    Sketcher sketcher(s, layout, delta);
    py::gil_scoped_release release;
    return sketcher.sketch(x, k, seed);
}

void save_sketches(const std::string& path, const std::vector<Sketch>& sketches) {
    if (sketches.empty()) throw UsageError("no sketches to write");
    const auto& first = sketches.front();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_sketches(out, sketches, first.scheme, static_cast<std::uint32_t>(first.k()), first.master_seed,
                   first.layout_id);
}

std::vector<Sketch> load_sketches(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_sketches(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted minwise hashing: red-green rejection sampling, Ioffe CWS and the unweighted reduction";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto data = py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", data.ptr());
    py::register_exception<DomainError>(m, "DomainError", data.ptr());
    py::register_exception<FormatError>(m, "FormatError", data.ptr());
    py::register_exception<MismatchError>(m, "MismatchError", data.ptr());
    py::register_exception<IncompatibleError>(m, "IncompatibleError", data.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", data.ptr());
    py::register_exception<IterationCapError>(m, "IterationCapError", data.ptr());

    py::class_<SparseVector>(m, "SparseVector")
        .def(py::init(&make_vector), py::arg("entries"), py::arg("dim"),
             "Build from (index, weight) pairs; zero weights are dropped")
        .def_property_readonly("dim", &SparseVector::dim)
        .def_property_readonly("nnz", &SparseVector::nnz)
        .def("entries", &vector_items)
        .def("__getitem__", &SparseVector::at)
        .def("__len__", &SparseVector::nnz)
        .def("__repr__", [](const SparseVector& x) {
            return "<SparseVector dim=" + std::to_string(x.dim()) + " nnz=" + std::to_string(x.nnz()) + ">";
        });

    m.def("l1_norm", &l1_norm, py::arg("x"));

    m.def(
        "parse_sparse_line",
        [](const std::string& line, int base, std::optional<std::size_t> dim) {
            ParseOptions opts;
            opts.base = base;
            opts.dim = dim;
            auto parsed = parse_sparse_line(line, opts, 1);
            return py::make_tuple(parsed.label, parsed.vector);
        },
        py::arg("line"), py::arg("base") = 0, py::arg("dim") = py::none(),
        "Parse 'label idx:val ...' and return (label, SparseVector)");

    m.def("format_sparse_line", &format_sparse_line, py::arg("x"), py::arg("label") = "", py::arg("base") = 0);

    m.def("exact_jaccard", &exact_jaccard, py::arg("x"), py::arg("y"));

    py::class_<RedGreenLayout>(m, "Layout")
        .def_static(
            "build",
            [](const std::vector<double>& maxima, double alpha, bool low_mem) {
                return RedGreenLayout::build(maxima, alpha, low_mem);
            },
            py::arg("maxima"), py::arg("alpha") = 1.0, py::arg("low_mem") = false)
        .def_static(
            "from_vectors",
            [](const std::vector<SparseVector>& vectors, std::optional<double> alpha, bool low_mem) {
                Dataset ds(vectors);
                auto maxima = dataset_maxima(ds);
                double a = alpha ? *alpha : optimize_alpha(ds, default_alpha_grid(), kDefaultMaxCells);
                return RedGreenLayout::build(maxima, a, low_mem);
            },
            py::arg("vectors"), py::arg("alpha") = py::none(), py::arg("low_mem") = false,
            "Layout over the coordinate-wise maxima; alpha=None searches the default grid")
        .def_static("load", &RedGreenLayout::load_file, py::arg("path"), py::arg("low_mem") = false)
        .def("save", &RedGreenLayout::save_file, py::arg("path"))
        .def_property_readonly("dim", &RedGreenLayout::dim)
        .def_property_readonly("total", &RedGreenLayout::total)
        .def_property_readonly("alpha", &RedGreenLayout::alpha)
        .def_property_readonly("id", &RedGreenLayout::id)
        .def_property_readonly("low_mem", &RedGreenLayout::low_mem)
        .def("is_green", py::overload_cast<const RedGreenLayout&, const SparseVector&, double>(&is_green_o1),
             py::arg("x"), py::arg("r"))
        .def("__repr__", [](const RedGreenLayout& l) {
            std::ostringstream s;
            s << "<Layout dim=" << l.dim() << " M=" << l.total() << " alpha=" << l.alpha() << ">";
            return s.str();
        });

    m.def("effective_sparsity", &effective_sparsity, py::arg("layout"), py::arg("x"));
    m.def("max_iterations", &max_iterations, py::arg("sparsity"), py::arg("delta"));
    m.def(
        "optimize_alpha",
        [](const std::vector<SparseVector>& vectors, std::optional<std::vector<double>> grid) {
            Dataset ds(vectors);
            auto g = grid ? *grid : default_alpha_grid();
            return optimize_alpha(ds, g, kDefaultMaxCells);
        },
        py::arg("vectors"), py::arg("grid") = py::none());

    py::class_<Sketch>(m, "Sketch")
        .def_property_readonly("scheme", [](const Sketch& s) { return std::string(to_string(s.scheme)); })
        .def_readonly("master_seed", &Sketch::master_seed)
        .def_readonly("layout_id", &Sketch::layout_id)
        .def_readonly("values", &Sketch::values)
        .def_readonly("levels", &Sketch::levels)
        .def_property_readonly("k", &Sketch::k)
        .def("__len__", &Sketch::k)
        .def(py::self == py::self);

    m.def("sketch", &sketch_vector, py::arg("x"), py::arg("k") = 500, py::arg("seed") = 1,
          py::arg("scheme") = "redgreen", py::arg("layout") = nullptr, py::arg("delta") = 1e-12,
          "k hash values of x under one scheme");

    m.def(
        "hash_one",
        [](const RedGreenLayout& layout, const SparseVector& x, std::uint64_t seed, double delta) {
            RedGreenHasher h(layout, delta);
            return h.hash_one(x, seed);
        },
        py::arg("layout"), py::arg("x"), py::arg("seed"), py::arg("delta") = 1e-12,
        "Number of chained draws until the first green one");

    m.def(
        "estimate",
        [](const Sketch& a, const Sketch& b, std::optional<std::size_t> prefix) {
            auto r = estimate_from_sketches(a, b, prefix);
            py::dict d;
            d["j_hat"] = r.j_hat;
            d["k"] = r.k;
            d["std_err"] = r.std_err;
            d["scheme"] = std::string(to_string(r.scheme));
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("prefix") = py::none());

    m.def("save_sketches", &save_sketches, py::arg("path"), py::arg("sketches"));
    m.def("load_sketches", &load_sketches, py::arg("path"));
}
