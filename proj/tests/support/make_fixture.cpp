// Writes the synthetic tonal fixture: one .krn file per piece plus
// cadences.csv.
//
//   make_fixture <output-dir> [pieces] [seed]

#include <filesystem>
#include <iostream>
#include <string>

#include "chordtension/io.h"
#include "synthetic.h"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_fixture <output-dir> [pieces] [seed]\n";
    return 2;
  }
  namespace fs = std::filesystem;
  chordtension::testing::TonalFixtureOptions options;
  if (argc > 2) options.pieces = std::stoi(argv[2]);
  if (argc > 3) options.seed = std::stoull(argv[3]);

  const fs::path dir(argv[1]);
  fs::create_directories(dir / "scores");
  const auto fixture = chordtension::testing::makeTonalFixture(options);
  for (std::size_t i = 0; i < fixture.kern.size(); ++i) {
    chordtension::writeTextFile((dir / "scores" / (fixture.piece_ids[i] + ".krn")).string(), fixture.kern[i]);
  }
  chordtension::writeTextFile((dir / "cadences.csv").string(),
                              chordtension::testing::formatAnnotations(fixture.cadences));
  std::cout << "wrote " << fixture.kern.size() << " scores to " << dir << "\n";
  return 0;
}
