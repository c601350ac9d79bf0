#pragma once

#include "qpl/numerics/complex.hpp"

#include <json.hpp>

#include <filesystem>
#include <vector>

namespace qpl {

using Json = nlohmann::json;

// Numbers travel as round-trip strings so no precision is lost to doubles.
Json real_to_json(const Real& x);
Real real_from_json(const Json& j);
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json complex_array(const std::vector<Complex>& v);
std::vector<Complex> complex_vector(const Json& j);

/// Writes text atomically enough for our purposes (temp file + rename).
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qpl
