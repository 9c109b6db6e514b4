// qspec: S-spectra, S-resolvents and slice-regular functions of quaternionic matrices.
//
//   qspec spectrum -i T.json [--tol r]
//   qspec resolvent -i T.json -s "[w,x,y,z]"
//   qspec apply -i T.json -f series.json [--plane x,y,z] [--clearance r] [--verify-plane]
//   qspec project -i T.json --select 0,2 [--plane x,y,z] [--clearance r]
//   qspec verify (-i T.json | --random n --seed s) [--clearance r]
//
// Reports are JSON on stdout (or -o file).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qspec/cli.hpp"

namespace {

qspec::ImaginaryUnit parse_plane(const std::string& text) {
  std::vector<double> xyz;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      xyz.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw qspec::ParseError("--plane expects three comma-separated numbers");
    }
  }
  if (xyz.size() != 3) throw qspec::ParseError("--plane expects three comma-separated numbers");
  try {
    return qspec::ImaginaryUnit::from_vector(xyz[0], xyz[1], xyz[2]);
  } catch (const qspec::InvalidArgument& e) {
    throw qspec::ParseError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  using qspec::cli::Command;

  CLI::App app{"Quaternionic S-functional calculus for matrices"};
  app.require_subcommand(1);

  qspec::cli::JobConfig config;
  std::string output_path;
  std::string plane_text;
  double spectral_tol = 0.0;
  double clearance = 0.0;
  std::size_t random_n = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", output_path, "Write the report here instead of stdout");
    sub->add_option("--tol", spectral_tol, "Invertibility threshold for the S-spectrum pencil")->check(CLI::PositiveNumber);
    sub->add_option("--check-tol", config.check_tol, "Residual threshold for verification checks")->check(CLI::PositiveNumber);
    sub->add_option("--quad-tol", config.quadrature_tol, "Quadrature convergence tolerance")->check(CLI::PositiveNumber);
  };
  auto add_contour = [&](CLI::App* sub) {
    sub->add_option("--plane", plane_text, "Slice plane unit as x,y,z (default 1,0,0)");
    sub->add_option("--clearance", clearance, "Circle radius around spectral points")->check(CLI::PositiveNumber);
  };

  auto* spectrum = app.add_subcommand("spectrum", "Compute the S-spectrum");
  spectrum->add_option("-i,--input", config.input_path, "Matrix JSON")->required();
  add_common(spectrum);

  auto* resolvent = app.add_subcommand("resolvent", "Evaluate the S-resolvent at a point");
  resolvent->add_option("-i,--input", config.input_path, "Matrix JSON")->required();
  resolvent->add_option("-s,--point", config.point, "Quaternion as JSON [w,x,y,z]")->required();
  add_common(resolvent);

  auto* apply = app.add_subcommand("apply", "Evaluate f(T) by contour integration");
  apply->add_option("-i,--input", config.input_path, "Matrix JSON")->required();
  apply->add_option("-f,--function", config.function_path, "Power series JSON")->required();
  apply->add_flag("--verify-plane", config.verify_plane, "Recompute in a second slice plane and compare");
  add_common(apply);
  add_contour(apply);

  auto* project = app.add_subcommand("project", "Riesz projector onto selected spectral spheres");
  project->add_option("-i,--input", config.input_path, "Matrix JSON")->required();
  project->add_option("--select", config.select, "Sphere indices, comma separated")->required()->delimiter(',');
  add_common(project);
  add_contour(project);

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  auto* verify_input = verify->add_option("-i,--input", config.input_path, "Matrix JSON");
  auto* verify_random = verify->add_option("--random", random_n, "Use a random n x n matrix")->check(CLI::PositiveNumber);
  verify->add_option("--seed", config.seed, "Seed for --random and sampled points");
  verify_input->excludes(verify_random);
  add_common(verify);
  add_contour(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qspec::cli::kInputError;
  }

  if (*spectrum) config.command = Command::spectrum;
  if (*resolvent) config.command = Command::resolvent;
  if (*apply) config.command = Command::apply;
  if (*project) config.command = Command::project;
  if (*verify) {
    config.command = Command::verify;
    if (verify_random->count() > 0) config.random_n = random_n;
    else if (config.input_path.empty()) {
      std::cerr << "verify needs -i <file> or --random <n>\n";
      return qspec::cli::kInputError;
    }
  }
  if (spectral_tol > 0.0) config.spectral_tol = spectral_tol;
  if (clearance > 0.0) config.clearance = clearance;
  if (!plane_text.empty()) {
    try {
      config.plane = parse_plane(plane_text);
    } catch (const qspec::ParseError& e) {
      std::cerr << e.what() << '\n';
      return qspec::cli::kInputError;
    }
  }

  const qspec::cli::Report report = qspec::cli::run(config);
  const std::string text = report.body.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path);
    if (!out) {
      std::cerr << "cannot write " << output_path << '\n';
      return qspec::cli::kInputError;
    }
    out << text;
  }
  return report.exit_code;
}
