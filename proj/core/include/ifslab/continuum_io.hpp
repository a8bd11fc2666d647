#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "ifslab/grid_continuum.hpp"

namespace ifslab {

/// Plain (P1) portable bitmap; file rows run top-down, so the first image
/// row is the cell row j = N-1. The chart is not stored and must be supplied
/// on import.
void write_pbm(std::ostream& os, const GridContinuum& k);
void write_cellset_pbm(std::ostream& os, const CellSet& cells);
void write_cellset_pbm_file(const std::string& path, const CellSet& cells);
void write_pbm_file(const std::string& path, const GridContinuum& k);
GridContinuum read_pbm(std::istream& is, Chart chart);
GridContinuum read_pbm_file(const std::string& path, Chart chart);

/// Plain (P2) portable graymap with one gray level per member (member m is
/// written as m + 1, background 0).
void write_family_pgm(std::ostream& os, const ContinuumFamily& family);
void write_family_pgm_file(const std::string& path, const ContinuumFamily& family);

/// JSON cell list {"chart": ..., "resolution": N, "cells": [[i, j], ...]}.
nlohmann::json continuum_to_json(const GridContinuum& k);
GridContinuum continuum_from_json(const nlohmann::json& j);

}  // namespace ifslab
