#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphartree/confinement.hpp"
#include "sphartree/evolution.hpp"
#include "sphartree/fields.hpp"
#include "sphartree/instability.hpp"
#include "sphartree/operators.hpp"
#include "sphartree/resonance.hpp"
#include "sphartree/sht.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sphartree;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<cplx> coeffs_array(const SpectralField& f) {
    py::array_t<cplx> out(f.a.size());
    std::copy(f.a.begin(), f.a.end(), out.mutable_data());
    return out;
}

SpectralField field_from_coeffs(int L, py::array_t<cplx, py::array::c_style> coeffs) {
    SpectralField f(L);
    if (static_cast<std::size_t>(coeffs.size()) != f.a.size())
        throw std::invalid_argument("coefficient array must have (L+1)^2 entries");
    std::copy(coeffs.data(), coeffs.data() + coeffs.size(), f.a.begin());
    return f;
}

py::array_t<cplx> values_array(const SpatialField& v) {
    py::array_t<cplx> out({v.grid.n_lat, v.grid.n_lon});
    std::copy(v.values.begin(), v.values.end(), out.mutable_data());
    return out;
}

SpatialField spatial_from_values(const SphereGrid& g,
                                 py::array_t<cplx, py::array::c_style> values) {
    SpatialField v(g);
    if (static_cast<std::size_t>(values.size()) != v.values.size())
        throw std::invalid_argument("value array must have n_lat*n_lon entries");
    std::copy(values.data(), values.data() + values.size(), v.values.begin());
    return v;
}

MultiplierSpec spec_from_name(const std::string& kind, double s) {
    if (kind == "laplacian") return MultiplierSpec::laplacian();
    if (kind == "sobolev") return MultiplierSpec::sobolev(s);
    if (kind == "poisson") return MultiplierSpec::poisson();
    throw std::invalid_argument("multiplier kind must be laplacian | sobolev | poisson");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Schrodinger-Poisson spectral toolkit on the unit sphere";

    py::class_<SphereGrid>(m, "SphereGrid")
        .def_readonly("bandlimit", &SphereGrid::bandlimit)
        .def_readonly("n_lat", &SphereGrid::n_lat)
        .def_readonly("n_lon", &SphereGrid::n_lon)
        .def_readonly("lon_offset", &SphereGrid::lon_offset)
        .def_property_readonly("colat", [](const SphereGrid& g) { return to_array(g.colat); })
        .def_property_readonly("x", [](const SphereGrid& g) { return to_array(g.x); })
        .def_property_readonly("weight",
                               [](const SphereGrid& g) { return to_array(g.weight); })
        .def("lon_step", &SphereGrid::lon_step)
        .def("supports", &SphereGrid::supports, "L"_a)
        .def("__repr__", [](const SphereGrid& g) {
            return "SphereGrid(bandlimit=" + std::to_string(g.bandlimit) +
                   ", n_lat=" + std::to_string(g.n_lat) +
                   ", n_lon=" + std::to_string(g.n_lon) + ")";
        });

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init<int>(), "L"_a)
        .def_static("from_coeffs", &field_from_coeffs, "L"_a, "coeffs"_a,
                    "coefficients in (l ascending, m ascending from -l) order")
        .def_readonly("L", &SpectralField::L)
        .def_property_readonly("coeffs", &coeffs_array)
        .def("get", [](const SpectralField& f, int l, int mm) { return f.at(l, mm); }, "l"_a,
             "m"_a)
        .def("set",
             [](SpectralField& f, int l, int mm, cplx v) { f.at(l, mm) = v; }, "l"_a, "m"_a,
             "value"_a)
        .def("norm_sq", &SpectralField::norm_sq)
        .def("norm", &SpectralField::norm)
        .def("__repr__", [](const SpectralField& f) {
            return "SpectralField(L=" + std::to_string(f.L) + ")";
        });

    py::class_<SpatialField>(m, "SpatialField")
        .def(py::init<const SphereGrid&>(), "grid"_a)
        .def_static("from_values", &spatial_from_values, "grid"_a, "values"_a)
        .def_readonly("grid", &SpatialField::grid)
        .def_property_readonly("values", &values_array)
        .def("integral_of_abs2", &SpatialField::integral_of_abs2)
        .def("integral", &SpatialField::integral);

    m.def("make_grid", &make_grid, "bandlimit"_a);
    m.def("make_offset_grid", &make_offset_grid, "gauss_order"_a, "n_lon"_a, "lon_offset"_a);
    m.def("make_oracle_grid", &make_oracle_grid, "target"_a, "gauss_order"_a);
    m.def("synthesize", py::overload_cast<const SpectralField&, const SphereGrid&>(&synthesize),
          "f"_a, "grid"_a);
    m.def("analyze", py::overload_cast<const SpatialField&, int>(&analyze), "v"_a, "L"_a);
    m.def("legendre_column", [](int mm, int L, double x) {
        std::vector<double> col(L - mm + 1);
        legendre_column(mm, L, x, col.data());
        return to_array(col);
    }, "m"_a, "L"_a, "x"_a);

    m.def("apply_multiplier",
          [](const std::string& kind, const SpectralField& f, double s) {
              return apply_multiplier(spec_from_name(kind, s), f);
          },
          "kind"_a, "f"_a, "s"_a = 0.0);
    m.def("poisson_potential", &poisson_potential, "density"_a);
    m.def("poisson_oracle", &poisson_oracle, "density"_a, "offset_grid"_a);
    m.def("hartree_energy", py::overload_cast<const SpectralField&>(&hartree_energy), "u"_a);
    m.def("total_energy", py::overload_cast<const SpectralField&>(&total_energy), "u"_a);

    py::class_<MixedState>(m, "MixedState")
        .def(py::init<>())
        .def(py::init<SpectralField>(), "u"_a)
        .def_readwrite("components", &MixedState::components)
        .def_readwrite("labels", &MixedState::labels)
        .def("bandlimit", &MixedState::bandlimit)
        .def("total_mass", &MixedState::total_mass)
        .def("component_mass", &MixedState::component_mass, "p"_a);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("dt", &TrajectoryRecord::dt)
        .def_property_readonly("times",
                               [](const TrajectoryRecord& r) { return to_array(r.times); })
        .def_property_readonly("mass",
                               [](const TrajectoryRecord& r) { return to_array(r.mass); })
        .def_property_readonly("energy",
                               [](const TrajectoryRecord& r) { return to_array(r.energy); })
        .def_readonly("component_mass", &TrajectoryRecord::component_mass)
        .def_property_readonly(
            "radial_energy",
            [](const TrajectoryRecord& r) { return to_array(r.radial_energy); })
        .def_readonly("snapshots", &TrajectoryRecord::snapshots)
        .def_readonly("final_state", &TrajectoryRecord::final_state)
        .def("mass_drift", &TrajectoryRecord::mass_drift)
        .def("energy_drift", &TrajectoryRecord::energy_drift)
        .def("write_csv", &TrajectoryRecord::write_csv, "path"_a, "config_echo"_a = "");

    m.def("default_dt", &default_dt, "L"_a);
    m.def("step_strang", &step_strang, "u"_a, "dt"_a);
    m.def("evolve", &evolve, "u0"_a, "dt"_a, "t_end"_a, "snapshot_every"_a = 0);
    m.def("evolve_mixed", &evolve_mixed, "state0"_a, "dt"_a, "t_end"_a,
          "snapshot_every"_a = 0);
    m.def("shared_potential", &shared_potential, "state"_a);

    py::class_<SectoralSubspaceField>(m, "SectoralSubspaceField")
        .def_readonly("n", &SectoralSubspaceField::n)
        .def_readonly("K", &SectoralSubspaceField::K)
        .def_readonly("delta", &SectoralSubspaceField::delta)
        .def_readonly("b", &SectoralSubspaceField::b)
        .def("norm", &SectoralSubspaceField::norm);

    py::class_<MinimizerResult>(m, "MinimizerResult")
        .def_readonly("field", &MinimizerResult::field)
        .def_readonly("omega", &MinimizerResult::omega)
        .def_readonly("energy", &MinimizerResult::energy)
        .def_readonly("overlap", &MinimizerResult::overlap)
        .def_readonly("euler_residual", &MinimizerResult::euler_residual)
        .def_readonly("iterations", &MinimizerResult::iterations)
        .def_readonly("converged", &MinimizerResult::converged)
        .def_readonly("energy_history", &MinimizerResult::energy_history);

    py::class_<SeparationReport>(m, "SeparationReport")
        .def_readonly("n", &SeparationReport::n)
        .def_readonly("delta0", &SeparationReport::delta0)
        .def_readonly("kappa", &SeparationReport::kappa)
        .def_readonly("omega", &SeparationReport::omega)
        .def_readonly("omega_prime", &SeparationReport::omega_prime)
        .def_readonly("t_n", &SeparationReport::t_n)
        .def_readonly("s0", &SeparationReport::s0)
        .def_readonly("separation_analytic", &SeparationReport::separation_analytic)
        .def_readonly("separation_solver", &SeparationReport::separation_solver)
        .def_readonly("overlap", &SeparationReport::overlap)
        .def_readonly("iterations", &SeparationReport::iterations)
        .def_readonly("solver_used", &SeparationReport::solver_used)
        .def("to_json",
             [](const SeparationReport& r) { return sphartree::to_json(r); });

    m.def("build_psi", &build_psi, "n"_a, "L"_a);
    m.def("psi_norm_sq_exact", &psi_norm_sq_exact, "n"_a);
    m.def("to_spectral", &to_spectral, "f"_a, "L"_a);
    m.def("minimize_on_subspace", &minimize_on_subspace, "n"_a, "K"_a, "delta"_a, "tol"_a,
          "max_iter"_a);
    m.def("kappa_n", &kappa_n, "n"_a);
    m.def("instability_experiment", &instability_experiment, "n"_a, "delta0"_a, "K"_a,
          "use_solver"_a, "tol"_a = 1e-9, "max_iter"_a = 200000);

    py::class_<RadialProblem>(m, "RadialProblem")
        .def_readonly("profile_name", &RadialProblem::profile_name)
        .def_readonly("eps", &RadialProblem::eps)
        .def_readonly("r_max", &RadialProblem::r_max)
        .def_readonly("n_r", &RadialProblem::n_r)
        .def_readonly("superharmonic", &RadialProblem::superharmonic)
        .def("confining_potential", &RadialProblem::confining_potential, "r"_a);

    py::class_<RadialEigenbasis>(m, "RadialEigenbasis")
        .def_readonly("eps", &RadialEigenbasis::eps)
        .def_readonly("h", &RadialEigenbasis::h)
        .def_property_readonly("r", [](const RadialEigenbasis& b) { return to_array(b.r); })
        .def_property_readonly("energies",
                               [](const RadialEigenbasis& b) { return to_array(b.energies); })
        .def_readonly("modes", &RadialEigenbasis::modes)
        .def_readonly("truncation_warning", &RadialEigenbasis::truncation_warning)
        .def("overlap", &RadialEigenbasis::overlap, "f"_a, "p"_a);

    py::class_<ConfinedState>(m, "ConfinedState")
        .def_readonly("basis", &ConfinedState::basis)
        .def_readonly("sphere_components", &ConfinedState::sphere_components)
        .def_readonly("retained_modes", &ConfinedState::retained_modes)
        .def_readonly("discarded_mass", &ConfinedState::discarded_mass)
        .def_readonly("truncation_warning", &ConfinedState::truncation_warning);

    m.def("make_quartic_problem", &make_quartic_problem, "eps"_a, "r_max"_a = 2.0,
          "n_r"_a = 2000);
    m.def("make_harmonic_problem", &make_harmonic_problem, "eps"_a, "r_max"_a = 2.0,
          "n_r"_a = 2000);
    m.def("radial_eigensolve", &radial_eigensolve, "prob"_a, "n_modes"_a);
    m.def("project_initial", &project_initial, "radial_profile"_a, "sphere_part"_a,
          "basis"_a, "n_modes"_a);
    m.def("evolve_limit", &evolve_limit, "state0"_a, "dt"_a, "t_end"_a,
          "snapshot_every"_a = 0);
    m.def("reconstruct_at", &reconstruct_at, "basis"_a, "comps"_a, "t"_a, "r_index"_a);

    py::class_<ResonanceQuery>(m, "ResonanceQuery")
        .def(py::init([](std::array<int, 4> N, long long k) {
                 ResonanceQuery q;
                 q.N = N;
                 q.k = k;
                 return q;
             }),
             "N"_a, "k"_a)
        .def_readwrite("N", &ResonanceQuery::N)
        .def_readwrite("k", &ResonanceQuery::k);

    py::class_<GrowthRow>(m, "GrowthRow")
        .def_readonly("N", &GrowthRow::N)
        .def_readonly("sup_count", &GrowthRow::sup_count)
        .def_readonly("argmax_k", &GrowthRow::argmax_k);

    m.def("count_representations", &count_representations, "M"_a, "sigma"_a, "N"_a);
    m.def("enumerate_lambda", &enumerate_lambda, "query"_a);
    m.def("lambda_growth_table", &lambda_growth_table, "Ns"_a);
    m.def("quadrilinear_I", &quadrilinear_I, "f1"_a, "f2"_a, "f3"_a, "f4"_a);

    m.def("write_sph1", &write_sph1, "path"_a, "f"_a);
    m.def("read_sph1", &read_sph1, "path"_a);

    m.def("random_field", &random_field, "L"_a, "seed"_a, "mass"_a = 1.0,
          "l_support"_a = -1, "l_decay"_a = 0.0);
    m.def("random_real_field", &random_real_field, "L"_a, "seed"_a, "mass"_a = 1.0,
          "l_support"_a = -1, "l_decay"_a = 0.0);
}
