#pragma once

#include <filesystem>
#include <string>

#include "pcs/data.hpp"

namespace pcs {

/// Read a comma-delimited numeric CSV. The header row carries feature names
/// plus the designated response column; every cell must parse as a decimal
/// number. Ragged rows are an error. Lines starting with '#' are skipped.
DataMatrix read_csv(const std::filesystem::path& path,
                    const std::string& response_column);

/// Write features plus response with a header row. Values are emitted with
/// round-trip precision so rewrites are byte-stable. A non-empty comment is
/// written first as a '#' line (provenance stamp).
void write_csv(const std::filesystem::path& path, const DataMatrix& data,
               const std::string& response_column = "y",
               const std::string& comment = "");

}  // namespace pcs
