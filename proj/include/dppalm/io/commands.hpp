#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dppalm/analysis/discretize.hpp"
#include "dppalm/analysis/moments.hpp"
#include "dppalm/coupling.hpp"
#include "dppalm/errors.hpp"
#include "dppalm/finite_dpp.hpp"
#include "dppalm/io/csv.hpp"
#include "dppalm/io/spec_file.hpp"
#include "dppalm/repulsiveness.hpp"
#include "dppalm/sampling.hpp"

namespace dppalm::io {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_parse = 3;
inline constexpr int exit_size_guard = 4;
inline constexpr int exit_theorem_violation = 5;

// Closed-form and series p_u disagreeing by more than this are flagged.
inline constexpr double discrepancy_threshold = 1e-6;

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return exit_parse;
    case ErrorKind::size_guard: return exit_size_guard;
    case ErrorKind::theorem_violation: return exit_theorem_violation;
    case ErrorKind::validation:
    case ErrorKind::domain:
    case ErrorKind::numerical: return exit_validation;
  }
  return exit_validation;
}

// Runs a command body, turning library errors into exit codes and a single
// "error: <token>: <message>" line on `err`.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
}

inline std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw parse_error(flag + ": empty entry in '" + text + "'");
    item = item.substr(first, last - first + 1);
    double x = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), x);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw parse_error(flag + ": '" + item + "' is not a number");
    }
    out.push_back(x);
  }
  if (out.empty()) throw parse_error(flag + ": expected a comma-separated list of numbers");
  return out;
}

/// Anchor encoding per space: a 1-based site index, "x" or "x,y" in R^d,
/// and "x,y" or "x,y,z" on the sphere (normalized). An empty string selects
/// site 1, the origin, or the last coordinate axis.
inline Point parse_anchor(const std::string& text, const GroundSpace& space) {
  if (space.kind() == GroundSpace::Kind::finite) {
    if (text.empty()) return Point::site(1);
    const std::vector<double> v = parse_number_list(text, "--anchor");
    if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] < 1.0) {
      throw parse_error("--anchor: expected a site index from 1 to " + std::to_string(space.sites()));
    }
    const Point p = Point::site(static_cast<std::size_t>(v[0]));
    check_point(space, p);
    return p;
  }
  const auto dim = static_cast<Eigen::Index>(space.ambient_dimension());
  RVector x = RVector::Zero(dim);
  if (text.empty()) {
    if (space.kind() == GroundSpace::Kind::sphere) x(dim - 1) = 1.0;
    return Point::coords(std::move(x));
  }
  const std::vector<double> v = parse_number_list(text, "--anchor");
  if (static_cast<Eigen::Index>(v.size()) != dim) {
    throw parse_error("--anchor: expected " + std::to_string(dim) + " coordinates");
  }
  for (Eigen::Index i = 0; i < dim; ++i) x(i) = v[static_cast<std::size_t>(i)];
  if (space.kind() == GroundSpace::Kind::sphere) {
    if (!(x.norm() > 0.0)) throw parse_error("--anchor: sphere anchor must be nonzero");
    x.normalize();
  }
  return Point::coords(std::move(x));
}

/// "xmin,xmax[,ymin,ymax]": one (lo, hi) pair per axis.
inline Window parse_window(const std::string& text, int dimension) {
  const std::vector<double> v = parse_number_list(text, "--window");
  if (static_cast<int>(v.size()) != 2 * dimension) {
    throw parse_error("--window: expected " + std::to_string(2 * dimension) + " numbers");
  }
  std::vector<std::pair<double, double>> bounds;
  for (int a = 0; a < dimension; ++a) {
    if (!(v[2 * a + 1] > v[2 * a])) throw parse_error("--window: bounds must increase on every axis");
    bounds.push_back({v[2 * a], v[2 * a + 1]});
  }
  return Window::box(std::move(bounds));
}

struct QuadratureFlags {
  std::optional<double> rel_tol;
  std::optional<double> truncation_radius;

  QuadratureSpec spec() const {
    QuadratureSpec s;
    if (rel_tol) s.relative_tolerance = *rel_tol;
    s.truncation_radius = truncation_radius;
    s.validate();
    return s;
  }
};

// cmd_validate ------------------------------------------------------------

inline int cmd_validate(const std::string& spec_path, std::ostream& out, std::ostream& err) {
  CsvWriter csv(out);
  csv.header({"status", "condition", "family", "detail"});
  try {
    const LoadedSpec spec = load_spec(spec_path);
    std::string detail;
    if (spec.finite) detail = "sites=" + std::to_string(spec.finite->n());
    if (spec.sphere) detail = "degrees=" + std::to_string(spec.sphere->max_degree() + 1);
    csv.row({std::string("valid"), std::string(), spec.family, detail});
    if (spec.sphere) {
      const SphereP sp = sphere_p(*spec.sphere);
      if (!sp.warning.empty()) err << "warning: " << sp.warning << '\n';
    }
    return exit_ok;
  } catch (const Error& e) {
    csv.row({std::string("invalid"), e.token(), std::string(), e.message()});
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

// cmd_repulsiveness ---------------------------------------------------------

struct RepulsivenessOptions {
  std::string spec_path;
  std::string anchor;
  QuadratureFlags quadrature;
  int profile_points = 21;
};

inline int cmd_repulsiveness(const RepulsivenessOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedSpec spec = load_spec(opt.spec_path);
    const Point u = parse_anchor(opt.anchor, spec.kernel.space());
    const RepulsivenessReport rep = repulsiveness_p(spec.kernel, u, opt.quadrature.spec(), opt.profile_points);

    CsvWriter csv(out);
    csv.header({"p_u", "norm_sq", "quadrature_error", "tail_estimate"});
    csv.row({rep.p_u, rep.norm_sq, rep.quadrature_error, rep.tail_estimate});

    if (spec.sphere) {
      const SphereP series = sphere_p(*spec.sphere);
      if (!series.warning.empty()) err << "warning: " << series.warning << '\n';
      double closed = std::numeric_limits<double>::quiet_NaN();
      long long flag = 0;
      if (spec.multiquadric) {
        closed = multiquadric_p_without_multiplicity(spec.multiquadric->first, spec.multiquadric->second);
        flag = std::abs(closed - series.value) > discrepancy_threshold ? 1 : 0;
      }
      csv.header({"p_u_series", "series_tail_bound", "p_u_quadrature", "p_u_closed_form", "discrepancy"});
      csv.row({series.value, series.tail_bound, rep.p_u, closed, flag});
    }

    const char* coordinate = "site";
    if (spec.kernel.space().kind() == GroundSpace::Kind::euclidean) coordinate = "distance";
    if (spec.kernel.space().kind() == GroundSpace::Kind::sphere) coordinate = "angle";
    csv.header({coordinate, "f_u"});
    for (const ProfileEntry& e : rep.density_profile) {
      if (spec.finite) {
        csv.row({static_cast<long long>(e.coordinate), e.f_u});
      } else {
        csv.row({e.coordinate, e.f_u});
      }
    }
    return exit_ok;
  });
}

// cmd_couple ----------------------------------------------------------------

struct CoupleOptions {
  std::string spec_path;
  std::string anchor;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
};

namespace detail {

inline void dump_infeasible(std::ostream& err, const FiniteDpp& dpp, std::size_t u, double flow,
                            const SubsetLaw& law_x, const SubsetLaw& law_xu) {
  err << "theorem violation: no coupling of X and its Palm version at site " << u << "\n";
  err << "max_flow," << format_number(flow) << "\n";
  err << "kernel (row-major re,im)\n";
  for (Eigen::Index i = 0; i < dpp.matrix().rows(); ++i) {
    for (Eigen::Index j = 0; j < dpp.matrix().cols(); ++j) {
      err << (j ? "," : "") << format_number(dpp.matrix()(i, j).real()) << ","
          << format_number(dpp.matrix()(i, j).imag());
    }
    err << "\n";
  }
  err << "subset,law_x,law_palm\n";
  for (std::size_t s = 0; s < law_x.probabilities.size(); ++s) {
    err << s << "," << format_number(law_x[static_cast<Subset>(s)]) << ","
        << format_number(law_xu[static_cast<Subset>(s)]) << "\n";
  }
}

}  // namespace detail

inline int cmd_couple(const CoupleOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedSpec spec = load_spec(opt.spec_path);
    if (!spec.finite) throw domain_error("couple: needs a finite kernel");
    const FiniteDpp& dpp = *spec.finite;
    check_law_size(dpp.n(), max_coupling_sites, "couple");
    const std::size_t u = parse_anchor(opt.anchor, spec.kernel.space()).index();
    require_intensity(spec.kernel, Point::site(u));
    if (opt.samples == 0) throw domain_error("couple: --samples must be positive");

    const SubsetLaw law_x = subset_law(dpp);
    const SubsetLaw law_xu = subset_law(palm_matrix(dpp, u));
    const CouplingResult coupling = coupling_feasible(law_x, law_xu, u);
    if (!coupling.table) {
      detail::dump_infeasible(err, dpp, u, coupling.max_flow, law_x, law_xu);
      return exit_theorem_violation;
    }
    const XiLaw xi = xi_law(*coupling.table, dpp, u);

    Rng rng(opt.seed);
    const CoupledSampler sampler(*coupling.table);
    std::vector<double> counts(dpp.n(), 0.0);
    std::size_t nonempty = 0;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto [s, t] = sampler.draw(rng);
      const Subset diff = s & ~t;
      if (diff == 0) continue;
      ++nonempty;
      counts[static_cast<std::size_t>(std::countr_zero(diff))] += 1.0;
    }
    const double p_emp = static_cast<double>(nonempty) / static_cast<double>(opt.samples);

    CsvWriter csv(out);
    csv.header({"max_flow", "p_u_exact", "p_u_empirical", "p_u_sigma", "samples"});
    csv.row({coupling.max_flow, xi.p, p_emp, std::sqrt(std::max(xi.p * (1.0 - xi.p), 0.0) / opt.samples),
             static_cast<long long>(opt.samples)});
    csv.header({"site", "f_u_exact", "f_u_empirical"});
    for (std::size_t v = 0; v < dpp.n(); ++v) {
      const double emp = nonempty ? counts[v] / static_cast<double>(nonempty) : 0.0;
      csv.row({static_cast<long long>(v + 1), xi.density[v], emp});
    }
    return exit_ok;
  });
}

// cmd_profile ---------------------------------------------------------------

struct ProfileOptions {
  std::vector<std::string> models{"ginibre", "jinc"};
  double beta = 1.0;
  double r_max = 5.0;
  int points = 101;
  QuadratureFlags quadrature;
};

// Planar model with unit thinning parameter alpha = 1 and scale beta.
inline Kernel profile_model(const std::string& name, double beta) {
  if (name == "ginibre") return ginibre_kernel({1.0, beta});
  if (name == "jinc") return thin_rescale(jinc_kernel(2), 1.0, beta);
  throw domain_error("profile: unknown model '" + name + "' (expected ginibre or jinc)");
}

inline std::vector<double> profile_radii(double r_max, int points) {
  if (!(r_max > 0.0)) throw domain_error("profile: --r-max must be positive");
  if (points < 2) throw domain_error("profile: --points must be at least 2");
  std::vector<double> r(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) r[static_cast<std::size_t>(i)] = r_max * i / (points - 1);
  return r;
}

inline int cmd_profile(const ProfileOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(opt.beta > 0.0 && opt.beta <= 1.0)) {
      throw validation_error(condition::param_bound, "profile: beta must lie in (0, 1]");
    }
    if (opt.models.empty()) throw domain_error("profile: no models requested");
    const std::vector<double> radii = profile_radii(opt.r_max, opt.points);
    const Point origin = Point::coords({0.0, 0.0});
    std::vector<RadialProfile> profiles;
    for (const std::string& m : opt.models) {
      profiles.push_back(radial_profile(profile_model(m, opt.beta), origin, radii, opt.quadrature.spec()));
    }
    CsvWriter csv(out);
    std::vector<std::string> columns{"r"};
    for (const std::string& m : opt.models) columns.push_back("density_" + m);
    csv.header(columns);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      std::vector<Cell> row{radii[i]};
      for (const RadialProfile& p : profiles) row.push_back(p.density[i]);
      csv.row(row);
    }
    return exit_ok;
  });
}

// cmd_moments ---------------------------------------------------------------

struct MomentsOptions {
  std::string model = "jinc";
  std::vector<double> orders{-1.5, -1.0, -0.5, 0.0, 0.5, 0.9, 1.0, 1.5};
  std::optional<double> rho;  // Ginibre intensity; defaults to 1/pi
  QuadratureFlags quadrature;
};

inline int cmd_moments(const MomentsOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    for (double k : opt.orders) {
      if (!(k > -2.0)) throw domain_error("moments: order " + format_number(k) + " must exceed -2");
    }
    const Point origin = Point::coords({0.0, 0.0});
    std::optional<Kernel> kernel;
    std::function<double(double)> closed;
    if (opt.model == "jinc") {
      if (opt.rho) throw domain_error("moments: --rho applies to the ginibre model only");
      kernel = jinc_kernel(2);
      closed = jinc_moment_closed;
    } else if (opt.model == "ginibre") {
      // The alpha * beta = 1 member with intensity rho: beta = 1 / (pi rho).
      const double rho = opt.rho.value_or(1.0 / std::numbers::pi);
      if (!(rho > 0.0)) throw validation_error(condition::param_bound, "moments: rho must be positive");
      kernel = ginibre_kernel({std::numbers::pi * rho, 1.0 / (std::numbers::pi * rho)});
      closed = [rho](double k) { return ginibre_moment(k, rho); };
    } else {
      throw domain_error("moments: unknown model '" + opt.model + "' (expected ginibre or jinc)");
    }
    CsvWriter csv(out);
    csv.header({"k", "closed_form", "quadrature", "abs_error", "tail_estimate", "divergent"});
    for (double k : opt.orders) {
      const MomentResult m = moment_quadrature(*kernel, origin, k, opt.quadrature.spec());
      csv.row({k, closed(k), m.quadrature, m.abs_error, m.tail_estimate, static_cast<long long>(m.diverged)});
    }
    return exit_ok;
  });
}

// cmd_sample ----------------------------------------------------------------

struct SampleOptions {
  std::string spec_path;
  std::string window;  // empty: [-3, 3] on every axis
  int resolution = 20;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  bool points = false;
};

inline int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedSpec spec = load_spec(opt.spec_path);
    const GroundSpace& space = spec.kernel.space();
    if (opt.samples == 0) throw domain_error("sample: --samples must be positive");
    Window window = Window::full_sphere();
    if (space.kind() == GroundSpace::Kind::euclidean) {
      std::string text = opt.window;
      if (text.empty()) {
        for (int a = 0; a < space.dimension(); ++a) text += (a ? "," : "") + std::string("-3,3");
      }
      window = parse_window(text, space.dimension());
    }
    const Discretization disc = spec.finite ? Discretization{*spec.finite, {}, {}, {}, spec.finite->matrix().trace().real()}
                                            : grid_discretize(spec.kernel, window, opt.resolution);
    if (!disc.clamped.empty()) {
      err << "warning: " << disc.clamped.size() << " eigenvalues of the discretized kernel clamped into [0, 1]\n";
    }
    const FiniteDpp& dpp = disc.dpp;

    Rng rng(opt.seed);
    std::vector<std::vector<Eigen::Index>> draws;
    draws.reserve(opt.samples);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      std::vector<Eigen::Index> sites;
      if (dpp.n() <= max_law_sites) {
        const Subset s = sample_exact(dpp, rng);
        for (Eigen::Index v = 0; v < static_cast<Eigen::Index>(dpp.n()); ++v) {
          if (s & (Subset{1} << v)) sites.push_back(v);
        }
      } else {
        sites = sample_spectral(dpp, rng);
      }
      draws.push_back(std::move(sites));
    }

    CsvWriter csv(out);
    csv.header({"sample", "count"});
    for (std::size_t i = 0; i < draws.size(); ++i) {
      csv.row({static_cast<long long>(i + 1), static_cast<long long>(draws[i].size())});
    }
    if (opt.points) {
      std::vector<std::string> columns{"sample", "site"};
      const std::size_t dim = spec.finite ? 0 : space.ambient_dimension();
      for (std::size_t a = 0; a < dim; ++a) columns.push_back("x" + std::to_string(a + 1));
      csv.header(columns);
      for (std::size_t i = 0; i < draws.size(); ++i) {
        for (Eigen::Index v : draws[i]) {
          std::vector<Cell> row{static_cast<long long>(i + 1), static_cast<long long>(v + 1)};
          for (std::size_t a = 0; a < dim; ++a) {
            row.push_back(disc.centers[static_cast<std::size_t>(v)].x()(static_cast<Eigen::Index>(a)));
          }
          csv.row(row);
        }
      }
    }
    return exit_ok;
  });
}

}  // namespace dppalm::io
