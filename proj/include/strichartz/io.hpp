#pragma once

// CSV serialization. A WaveFunction or Spectrum file starts with one metadata
// line
//   # strichartz <space|frequency> n=<n> dx=<dx> x0=<x0>
// followed by the header "x,re,im" (or "xi,re,im") and one row per sample.
// Numbers are written with 17 significant digits so files round-trip exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include "strichartz/lattice.hpp"
#include "strichartz/propagator.hpp"

namespace strichartz {

void write_csv(std::ostream& os, const WaveFunction& f);
void write_csv(std::ostream& os, const Spectrum& g);
WaveFunction read_wavefunction_csv(std::istream& is);
Spectrum read_spectrum_csv(std::istream& is);

/// Rows (t, x, re, im) with the physical position of every sample.
void write_csv(std::ostream& os, const SpaceTimeField& u);

/// Generic numeric table with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

void write_csv(std::ostream& os, const Table& table);

}  // namespace strichartz
