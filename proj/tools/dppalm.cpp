#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dppalm/io/commands.hpp"

namespace {

using namespace dppalm::io;

void add_quadrature_flags(CLI::App* cmd, QuadratureFlags& q) {
  cmd->add_option("--rel-tol", q.rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--truncation-radius", q.truncation_radius, "Explicit radial integration range")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Palm distributions and repulsiveness of determinantal point processes"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a kernel specification file");
  validate->add_option("spec", validate_path, "Kernel specification file")->required();

  RepulsivenessOptions rep;
  auto* repulsiveness = app.add_subcommand("repulsiveness", "p_u, ||K(u,.)||^2 and the f_u profile");
  repulsiveness->add_option("spec", rep.spec_path, "Kernel specification file")->required();
  repulsiveness->add_option("--anchor", rep.anchor, "Anchor point: site index, \"x,y\" or \"x,y,z\"");
  repulsiveness->add_option("--profile-points", rep.profile_points, "Points in the f_u profile")
      ->check(CLI::NonNegativeNumber);
  add_quadrature_flags(repulsiveness, rep.quadrature);

  CoupleOptions couple_opt;
  auto* couple = app.add_subcommand("couple", "Exact coupling of X and its Palm version on a finite kernel");
  couple->add_option("spec", couple_opt.spec_path, "Kernel specification file")->required();
  couple->add_option("--anchor", couple_opt.anchor, "Anchor site (1-based)");
  couple->add_option("--seed", couple_opt.seed, "Random seed");
  couple->add_option("--samples", couple_opt.samples, "Coupled draws for the empirical estimates");

  ProfileOptions prof;
  auto* profile = app.add_subcommand("profile", "Radial densities of the displacement |Z_u - u|");
  profile->add_option("--models", prof.models, "Models among ginibre, jinc")->delimiter(',');
  profile->add_option("--beta", prof.beta, "Scale parameter in (0, 1]");
  profile->add_option("--r-max", prof.r_max, "Largest radius of the grid");
  profile->add_option("--points", prof.points, "Grid points from 0 to r-max");
  add_quadrature_flags(profile, prof.quadrature);

  MomentsOptions mom;
  std::string orders;
  auto* moments = app.add_subcommand("moments", "Moments E|Z_u - u|^k, closed form against quadrature");
  moments->add_option("model", mom.model, "ginibre or jinc")->required();
  moments->add_option("--k", orders, "Comma-separated orders");
  moments->add_option("--rho", mom.rho, "Ginibre intensity (default 1/pi)");
  add_quadrature_flags(moments, mom.quadrature);

  SampleOptions samp;
  auto* sample = app.add_subcommand("sample", "Draw samples of a kernel discretized on a grid");
  sample->add_option("spec", samp.spec_path, "Kernel specification file")->required();
  sample->add_option("--window", samp.window, "\"xmin,xmax,ymin,ymax\" (Euclidean kernels)");
  sample->add_option("--resolution", samp.resolution, "Cells per axis");
  sample->add_option("--samples", samp.samples, "Number of draws");
  sample->add_option("--seed", samp.seed, "Random seed");
  sample->add_flag("--points", samp.points, "Also emit the sampled sites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return exit_parse;
  }

  if (*validate) return cmd_validate(validate_path, std::cout, std::cerr);
  if (*repulsiveness) return cmd_repulsiveness(rep, std::cout, std::cerr);
  if (*couple) return cmd_couple(couple_opt, std::cout, std::cerr);
  if (*profile) return cmd_profile(prof, std::cout, std::cerr);
  if (*moments) {
    if (!orders.empty()) {
      const int code = guarded(std::cerr, [&] {
        mom.orders = parse_number_list(orders, "--k");
        return exit_ok;
      });
      if (code != exit_ok) return code;
    }
    return cmd_moments(mom, std::cout, std::cerr);
  }
  if (*sample) return cmd_sample(samp, std::cout, std::cerr);
  return exit_parse;
}
