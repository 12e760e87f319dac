#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "holoqed/harness.hpp"

namespace fs = std::filesystem;
namespace hx = holoqed::harness;

namespace {

int cmd_run(const fs::path& manifest_path, const fs::path& output_dir) {
  const auto manifest = hx::load_manifest(manifest_path);
  const auto out = hx::run(manifest, manifest_path.parent_path(), output_dir);
  std::cout << "wrote " << out.output_dir.string() << '\n';
  for (const auto& f : out.files) std::cout << "  " << f << '\n';
  return hx::exit_code::ok;
}

int cmd_validate(const fs::path& manifest_path) {
  const auto manifest = hx::load_manifest(manifest_path);
  const auto violations = hx::validate(manifest, manifest_path.parent_path());
  if (violations.empty()) {
    std::cout << manifest_path.string() << ": ok\n";
    return hx::exit_code::ok;
  }
  std::cout << manifest_path.string() << ": " << violations.size() << " violation(s)\n";
  for (const auto& v : violations) std::cout << "  " << v << '\n';
  return hx::exit_code::schema;
}

int cmd_templates(const fs::path& dir) {
  const auto t = hx::templates();
  if (dir.empty()) {
    std::cout << t.dump(2) << '\n';
    return hx::exit_code::ok;
  }
  fs::create_directories(dir);
  for (const auto& [name, manifest] : t.items()) {
    const fs::path p = dir / (name + ".json");
    std::ofstream(p) << manifest.dump(2) << '\n';
    std::cout << p.string() << '\n';
  }
  return hx::exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holoqed: holographic qMPS simulation on a qubit-cavity device"};
  app.set_version_flag("--version", std::string(hx::version()));
  app.require_subcommand(1);

  fs::path run_manifest, run_output, validate_manifest, templates_dir;
  auto* run = app.add_subcommand("run", "Run the experiment a manifest describes");
  run->add_option("manifest", run_manifest, "Manifest JSON")->required();
  run->add_option("-o,--output-dir", run_output, "Override the manifest's output_dir");
  auto* validate = app.add_subcommand("validate", "Check a manifest without running it");
  validate->add_option("manifest", validate_manifest, "Manifest JSON")->required();
  auto* templates = app.add_subcommand("templates", "Emit the figure-pipeline template manifests");
  templates->add_option("-o,--output-dir", templates_dir, "Write one <name>.json per template here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hx::exit_code::usage;
  }

  try {
    if (*run) return cmd_run(run_manifest, run_output);
    if (*validate) return cmd_validate(validate_manifest);
    return cmd_templates(templates_dir);
  } catch (const holoqed::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hx::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return hx::exit_code::internal;
  }
}
