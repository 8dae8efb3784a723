#include "ferrotorque/cli/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include "ferrotorque/error.hpp"

namespace ferrotorque::cli {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", value);
  return buf;
}

double round9(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw ValidationError("cannot create directory " + path.parent_path().string());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ValidationError("cannot rename " + tmp.string() + " to " + path.string());
}

}  // namespace ferrotorque::cli
