#include "fusion/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fusion {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& path,
                    std::size_t row) {
  char* end = nullptr;
  const std::string t = trim(field);
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw std::invalid_argument(path + ": bad number at row " +
                                std::to_string(row) + ": '" + field + "'");
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ObservationSet read_observations_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y")
    throw std::invalid_argument(path + ": expected header 'x,y'");
  ObservationSet data;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2)
      throw std::invalid_argument(path + ": expected 2 fields at row " +
                                  std::to_string(row));
    data.push_back({parse_double(fields[0], path, row),
                    parse_double(fields[1], path, row)});
  }
  validate_observations(data);
  return data;
}

void write_observations_csv(const std::string& path,
                            const ObservationSet& data) {
  std::ofstream out = open_output(path);
  out << "x,y\n";
  for (const auto& p : data)
    out << format_g17(p.x) << ',' << format_g17(p.y) << '\n';
}

std::vector<ModelParams> read_trace_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "iter,mu_x,mu_y,sigma2_x,sigma2_y,rho")
    throw std::invalid_argument(
        path + ": expected header 'iter,mu_x,mu_y,sigma2_x,sigma2_y,rho'");
  std::vector<ModelParams> states;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6)
      throw std::invalid_argument(path + ": expected 6 fields at row " +
                                  std::to_string(row));
    ModelParams p;
    p.mu_x = parse_double(fields[1], path, row);
    p.mu_y = parse_double(fields[2], path, row);
    p.sigma2_x = parse_double(fields[3], path, row);
    p.sigma2_y = parse_double(fields[4], path, row);
    p.rho = parse_double(fields[5], path, row);
    states.push_back(p);
  }
  return states;
}

void write_trace_csv(const std::string& path,
                     const std::vector<ModelParams>& states) {
  std::ofstream out = open_output(path);
  out << "iter,mu_x,mu_y,sigma2_x,sigma2_y,rho\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    const ModelParams& p = states[i];
    out << i << ',' << format_g17(p.mu_x) << ',' << format_g17(p.mu_y) << ','
        << format_g17(p.sigma2_x) << ',' << format_g17(p.sigma2_y) << ','
        << format_g17(p.rho) << '\n';
  }
}

void write_curve_csv(const std::string& path, const DensityCurve& curve) {
  std::ofstream out = open_output(path);
  out << "value,density\n";
  for (std::size_t i = 0; i < curve.xs.size(); ++i)
    out << format_g17(curve.xs[i]) << ',' << format_g17(curve.ys[i]) << '\n';
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string s = ss.str();
  return fnv1a64(s);
}

}  // namespace fusion
