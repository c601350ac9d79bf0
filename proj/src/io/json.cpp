#include "qpl/io/json.hpp"

#include "qpl/numerics/errors.hpp"

#include <fstream>
#include <sstream>

namespace qpl {

Json real_to_json(const Real& x) { return to_string(x); }

Real real_from_json(const Json& j) {
    if (j.is_string()) return parse_real(j.get<std::string>());
    if (j.is_number()) return Real(j.get<double>());
    throw UsageError("expected a number or numeric string in JSON");
}

Json complex_to_json(const Complex& z) { return Json::array({real_to_json(z.re), real_to_json(z.im)}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw UsageError("expected [re, im] in JSON");
    return {real_from_json(j[0]), real_from_json(j[1])};
}

Json complex_array(const std::vector<Complex>& v) {
    Json out = Json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

std::vector<Complex> complex_vector(const Json& j) {
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw UsageError("cannot write " + path.string());
        f << text;
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace qpl
