// SPDX-License-Identifier: Apache-2.0
//
// Design matrix import/export: a lossless JSON interchange schema, a compact
// text token grammar, a LaTeX array emitter, and the committed fixture
// corpus loader.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stbc/design.hpp"

namespace stbc {

enum class ExportFormat { Json, Text, Latex };

// Lossless schema:
//   {"p":int,"n":int,"k":int,
//    "entries":[[[{"var":int,"part":"I"|"Q","re":{"a":"p/q","b":"r/s"},
//                  "im":{...}}, ...]]]}
// Rationals travel as exact "num/den" strings; an empty term list is a zero
// entry. Round trips preserve every coefficient bit for bit.
std::string to_json(const DesignMatrix& d);
DesignMatrix from_json(const std::string& text);

// One token per entry, one line per row, first line "[p,n,k]". Token shapes:
//   0   x3   -x1*   x0/r2   (x0+x1*)/r2   x1I-j*x0Q   (x1I-j*x0Q)/r2
// Entries whose coefficients fall outside unit or 1/sqrt(2) magnitudes have
// no token form and are rejected; JSON is the fallback for those.
std::string to_text(const DesignMatrix& d);
DesignMatrix from_text(const std::string& text);

std::string entry_token(const LinearEntry& e);
LinearEntry parse_entry_token(const std::string& token);

// Emit-only array rendering of the same token shapes.
std::string to_latex(const DesignMatrix& d);

std::string export_design(const DesignMatrix& d, ExportFormat f);
// Accepts either serialized form; JSON is detected by a leading '{'.
DesignMatrix import_design(const std::string& bytes);

// Hand-transcribed reference matrix with a provenance note. The matrix
// payload uses the text token grammar, one row per "rows" element.
struct Fixture {
  std::string name;
  std::string source;
  DesignMatrix design;
};

// Committed corpus location; the STBC_FIXTURE_DIR environment variable
// overrides the default ./tests/fixtures.
std::filesystem::path fixture_dir();
// Parses one fixture file and verifies the design is orthogonal.
Fixture load_fixture(const std::filesystem::path& file);
// All *.json fixtures in fixture_dir(), sorted by file name.
std::vector<Fixture> load_all_fixtures();

}  // namespace stbc
