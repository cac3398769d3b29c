#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "radseq/core_arith.hpp"
#include "radseq/match.hpp"
#include "radseq/pell.hpp"
#include "radseq/stats.hpp"

namespace py = pybind11;
using namespace radseq;

namespace {

// mpz values cross the boundary as decimal strings; Python ints are unbounded.
py::object to_py_int(const std::string& decimal) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(decimal.c_str(), nullptr, 10));
}

py::object to_py_int(const mpz_class& z) { return to_py_int(z.get_str()); }

mpz_class to_mpz(const py::object& v) { return mpz_class(py::str(v).cast<std::string>()); }

py::dict quality_dict(const QualityRecord& rec) {
  py::dict d;
  d["n"] = rec.n;
  d["r"] = rec.r;
  d["q"] = rec.q_classic;
  d["merit"] = rec.merit;
  return d;
}

py::dict family_dict(const FamilyRecord& rec) {
  py::dict d;
  d["k"] = rec.k;
  d["m"] = to_py_int(rec.m);
  d["n"] = to_py_int(rec.n);
  d["rad_match"] = rec.rad_match;
  d["rad_next_match"] = rec.rad_next_match;
  d["square_identity"] = rec.square_identity;
  d["ok"] = rec.ok();
  d["mersenne_factors"] = rec.mersenne_factors;
  return d;
}

py::dict bound_dict(const ProductBoundReport& rep) {
  py::dict d;
  d["n"] = rep.n;
  d["k"] = rep.k;
  d["holds"] = rep.holds;
  d["lhs"] = rep.lhs;
  d["rhs"] = rep.rhs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_radseq, m) {
  m.doc() = "radicals of consecutive integers: factorization, sieves, matching pairs, "
            "Pell and Stormer searches";
  m.attr("VALUE_CAP") = kValueCap;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const CapacityError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.def("factorize",
        [](uint64_t n) { return factorize(n).factors; },
        py::arg("n"), "Prime factorization as a sorted list of (prime, exponent) pairs.");
  m.def("radical", &radical, py::arg("n"), "Product of the distinct primes of n.");
  m.def("radical_support",
        [](uint64_t n) { return radical_support(n).primes; },
        py::arg("n"), "Sorted distinct primes of n.");
  m.def("window_support",
        [](uint64_t n, uint64_t len) { return window_support(n, len).primes; },
        py::arg("n"), py::arg("len"),
        "Sorted distinct primes of n (n+1) ... (n+len-1).");
  m.def("is_prime", &is_prime_u64, py::arg("n"), "Deterministic 64-bit primality test.");
  m.def("squarefree_divisors",
        [](const std::vector<uint64_t>& primes) {
          std::vector<std::vector<uint64_t>> out;
          for (const PrimeSupport& s : squarefree_divisors(canonical_support(primes)))
            out.push_back(s.primes);
          return out;
        },
        py::arg("primes"), "Supports of all squarefree divisors of the given prime product.");
  m.def("support_subset",
        [](const std::vector<uint64_t>& sub, const std::vector<uint64_t>& super) {
          return support_subset(canonical_support(sub), canonical_support(super));
        },
        py::arg("sub"), py::arg("super"), "Whether one prime support contains another.");

  m.def("fundamental_solution",
        [](const py::object& d) {
          PellSolution s = fundamental_solution(to_mpz(d));
          return py::make_tuple(to_py_int(s.x), to_py_int(s.y));
        },
        py::arg("d"), "Minimal (x, y) with x^2 - d y^2 = 1.");
  m.def("solutions_up_to",
        [](const py::object& d, const py::object& x_max) {
          py::list out;
          for (const PellSolution& s : solutions_up_to(to_mpz(d), to_mpz(x_max)))
            out.append(py::make_tuple(s.index, to_py_int(s.x), to_py_int(s.y)));
          return out;
        },
        py::arg("d"), py::arg("x_max"),
        "All (index, x, y) with x^2 - d y^2 = 1 and x <= x_max, ascending.");
  m.def("consecutive_with_support",
        [](const std::vector<uint64_t>& primes, uint64_t x, unsigned threads) {
          PrimeSupport q = canonical_support(primes);
          py::gil_scoped_release release;
          return consecutive_with_support(q, x, threads);
        },
        py::arg("primes"), py::arg("x"), py::arg("threads") = 1,
        "All n <= x such that every prime of n (n+1) lies in the given set.");

  m.def("run_length",
        [](uint64_t m, uint64_t n, uint64_t cap) {
          RunResult r = run_length(m, n, cap);
          return py::make_tuple(r.length, r.truncated);
        },
        py::arg("m"), py::arg("n"), py::arg("cap"),
        "(length, truncated): largest k <= cap with rad(m+i) = rad(n+i) for i < k.");
  m.def("verify_pair", &verify_pair, py::arg("m"), py::arg("n"), py::arg("k"),
        "Whether the run of equal radicals at (m, n) reaches length k.");
  m.def("equal_run_pairs",
        [](uint64_t x, uint64_t k, unsigned threads) {
          py::gil_scoped_release release;
          std::vector<PairMatch> pairs = equal_run_pairs(x, k, threads);
          py::gil_scoped_acquire acquire;
          py::list out;
          for (const PairMatch& p : pairs) out.append(py::make_tuple(p.m, p.n, p.run));
          return out;
        },
        py::arg("x"), py::arg("k"), py::arg("threads") = 1,
        "All (m, n, run) with m < n <= x and a common radical run of length >= k.");
  m.def("window_matches",
        [](uint64_t x, uint64_t k, uint64_t l, unsigned threads) {
          py::gil_scoped_release release;
          std::vector<WindowMatch> matches = window_matches(x, k, l, threads);
          py::gil_scoped_acquire acquire;
          py::list out;
          for (const WindowMatch& w : matches)
            out.append(py::make_tuple(w.m, w.n, w.k, w.l, w.key.primes));
          return out;
        },
        py::arg("x"), py::arg("k"), py::arg("l"), py::arg("threads") = 1,
        "All (m, n, k, l, support) with equal k- and l-window radicals, m < n <= x.");
  m.def("verify_family",
        [](uint32_t k_min, uint32_t k_max) {
          py::list out;
          for (const FamilyRecord& r : verify_family(k_min, k_max)) out.append(family_dict(r));
          return out;
        },
        py::arg("k_min") = 2, py::arg("k_max") = 40,
        "Identity checks for m = 2^k - 2, n = 2^k (2^k - 2) over a k range.");

  m.def("count_smooth_radicals",
        [](uint64_t x, uint64_t y, unsigned threads) {
          py::gil_scoped_release release;
          return count_smooth_radicals(x, y, threads);
        },
        py::arg("x"), py::arg("y"), py::arg("threads") = 1,
        "Number of n <= x with rad(n) <= y.");
  m.def("smooth_count_report",
        [](uint64_t x, uint64_t y, unsigned threads) {
          SmoothCountReport rep = smooth_count_report(x, y, threads);
          py::dict d;
          d["x"] = rep.x;
          d["y"] = rep.y;
          d["exact"] = rep.exact;
          d["estimate"] = rep.estimate ? py::cast(*rep.estimate) : py::none();
          d["ratio"] = rep.ratio ? py::cast(*rep.ratio) : py::none();
          return d;
        },
        py::arg("x"), py::arg("y"), py::arg("threads") = 1,
        "Exact count next to the growth estimate, None where undefined.");
  m.def("smooth_count_estimate", &smooth_count_estimate, py::arg("x"), py::arg("y"),
        "y * exp(2 sqrt(2 v / log v)) with v = log(x/y); defined for x/y > e^e.");
  m.def("product_ratio_check",
        [](uint64_t n, uint64_t k) { return bound_dict(product_ratio_check(n, k)); },
        py::arg("n"), py::arg("k"),
        "Exponent-vector comparison of prod rad(n+i) against the window radical bound.");
  m.def("quality",
        [](uint64_t n) { return quality_dict(quality(n)); },
        py::arg("n"), "Radical quality log(n+1) / log rad(n(n+1)) with its merit.");
  m.def("quality_scan",
        [](uint64_t n_max) {
          py::gil_scoped_release release;
          QualityScanResult res = quality_scan(n_max);
          py::gil_scoped_acquire acquire;
          py::list setters;
          for (const QualityRecord& rec : res.record_setters) setters.append(quality_dict(rec));
          py::dict d;
          d["record_setters"] = setters;
          d["best"] = quality_dict(res.best);
          return d;
        },
        py::arg("n_max"), "Strict quality record setters over 2 <= n <= n_max.");
  m.def("min_adjacent_radical",
        [](uint64_t n, uint64_t k) {
          AdjacentRadicalMin r = min_adjacent_radical(n, k);
          return py::make_tuple(r.offset, r.value);
        },
        py::arg("n"), py::arg("k"),
        "(offset, value) of the smallest rad((n+i)(n+i+1)) over 0 <= i <= k-2.");
  m.def("window_exponent_constant",
        [](uint64_t k) {
          Rational r = window_exponent_constant(k);
          return py::make_tuple(r.num, r.den);
        },
        py::arg("k"), "Reduced (num, den) of 2/k for even k, 2/(k-1) for odd k.");
}
