#include "idgsem/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace idgsem {

std::string format_g17(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void save_profile_csv(const std::string& path, const FvProfile& profile) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_profile_csv: cannot open " + path);
  out << "x,u\n";
  for (Eigen::Index j = 0; j < profile.x.size(); ++j)
    out << format_g17(profile.x(j)) << ',' << format_g17(profile.u(j)) << '\n';
}

FvProfile load_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_profile_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,u", 0) != 0)
    throw std::runtime_error("load_profile_csv: bad header in " + path);
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("load_profile_csv: bad row in " + path);
    xs.push_back(std::stod(line.substr(0, comma)));
    us.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 2) throw std::runtime_error("load_profile_csv: too few rows in " + path);
  FvProfile prof;
  prof.x = Eigen::Map<vec>(xs.data(), xs.size());
  prof.u = Eigen::Map<vec>(us.data(), us.size());
  // Uniform cell centers: recover the domain ends from the spacing.
  double dx = prof.x(1) - prof.x(0);
  prof.x_left = prof.x(0) - 0.5 * dx;
  prof.x_right = prof.x(prof.x.size() - 1) + 0.5 * dx;
  return prof;
}

}  // namespace idgsem
