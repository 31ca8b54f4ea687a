// Writes a synthetic scene package with circular lakes, for demos and the
// service smoke test.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aquacad/errors.hpp"
#include "aquacad/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic Landsat-5 scene package", "aquacad-synth"};
  aquacad::SyntheticSceneSpec spec;
  std::string dir;
  std::vector<std::string> lakes;
  app.add_option("dir", dir, "output directory")->required();
  app.add_option("--id", spec.scene_id)->capture_default_str();
  app.add_option("--width", spec.width)->capture_default_str();
  app.add_option("--height", spec.height)->capture_default_str();
  app.add_option("--lake", lakes, "ROW,COL,RADIUS (repeatable)");
  app.add_option("--noise", spec.nd_noise_sigma, "ND noise sigma")->capture_default_str();
  app.add_option("--seed", spec.seed)->capture_default_str();
  app.add_flag("--tiff", spec.tiff, "write TIFF bands instead of PGM");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (!lakes.empty()) {
    spec.lakes.clear();
    for (const auto& text : lakes) {
      long r = 0, c = 0;
      double rad = 0;
      if (std::sscanf(text.c_str(), "%ld,%ld,%lf", &r, &c, &rad) != 3) {
        std::cerr << "aquacad-synth: bad --lake '" << text << "'\n";
        return 2;
      }
      spec.lakes.push_back({r, c, rad});
    }
  }
  try {
    const auto ref = aquacad::write_synthetic_scene(dir, spec);
    std::cout << ref.scene_id << '\n';
  } catch (const std::exception& e) {
    std::cerr << "aquacad-synth: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
