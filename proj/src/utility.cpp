#include "gtshap/utility.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gtshap/format.hpp"

namespace gtshap {

std::vector<std::pair<Coalition, double>> EvalCache::sorted_entries() const {
  std::vector<std::pair<Coalition, double>> entries;
  {
    std::shared_lock lock(mutex_);
    entries.assign(map_.begin(), map_.end());
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return entries;
}

void EvalCache::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("EvalCache::save: cannot open '" + path + "' for writing");
  }
  out << "coalition_hex,utility\n";
  for (const auto& [coalition, value] : sorted_entries()) {
    out << coalition.to_hex() << ',' << format_real_exact(value) << '\n';
  }
  if (!out) {
    throw std::runtime_error("EvalCache::save: write to '" + path + "' failed");
  }
}

EvalCache EvalCache::load(const std::string& path, int n_players) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("EvalCache::load: cannot open '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("EvalCache::load: '" + path + "' is empty");
  }
  if (line == "coalition_hex,utility\r") line.pop_back();
  if (line != "coalition_hex,utility") {
    throw std::runtime_error("EvalCache::load: '" + path + "' has unexpected header '" + line +
                             "'");
  }
  EvalCache cache;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("EvalCache::load: '" + path + "' line " +
                               std::to_string(line_no) + " has no comma");
    }
    Coalition s = Coalition::from_hex(line.substr(0, comma), n_players);
    const std::string value_text = line.substr(comma + 1);
    errno = 0;
    char* end = nullptr;
    double value = std::strtod(value_text.c_str(), &end);
    if (end == value_text.c_str() || *end != '\0' || errno == ERANGE) {
      throw std::runtime_error("EvalCache::load: '" + path + "' line " +
                               std::to_string(line_no) + " has invalid utility '" + value_text +
                               "'");
    }
    cache.insert(s, value);
  }
  return cache;
}

}  // namespace gtshap
