#pragma once

#include <filesystem>
#include <string>

namespace pcs {

/// The six-section analysis documentation scaffold, in order.
std::string doc_scaffold_text();

void write_doc_scaffold(const std::filesystem::path& path);

}  // namespace pcs
