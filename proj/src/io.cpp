#include "mixlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mixlab {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoFailure, "cannot open " + tmp);
    out << content;
    if (!out) fail(ErrorKind::IoFailure, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::IoFailure, "rename to " + path + ": " + ec.message());
}

std::string grid_to_csv(const GridFunction& f) {
  std::ostringstream out;
  out << "x,value\n";
  for (std::size_t j = 0; j < f.size(); ++j)
    out << format_double(f.x(j)) << ',' << format_double(f[j]) << '\n';
  return out.str();
}

GridFunction grid_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
    fail(ErrorKind::IoFailure, "missing 'x,value' header");
  std::vector<double> xs, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      fail(ErrorKind::IoFailure, "malformed CSV row: " + line);
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorKind::IoFailure, "malformed CSV row: " + line);
    }
  }
  if (xs.size() < 16) fail(ErrorKind::IoFailure, "too few samples");
  const double dx = xs[1] - xs[0];
  if (!(dx > 0.0)) fail(ErrorKind::IoFailure, "grid is not increasing");
  const double L = dx * static_cast<double>(xs.size());
  if (std::abs(xs.front() + 0.5 * L) > 1e-9 * L)
    fail(ErrorKind::IoFailure, "grid must start at -L/2");
  return GridFunction(L, std::move(values));
}

std::string grid_to_json(const GridFunction& f) {
  nlohmann::json j;
  j["L"] = f.period();
  j["n"] = f.size();
  j["values"] = f.values();
  return j.dump(2) + "\n";
}

GridFunction grid_from_json_text(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return GridFunction(j.at("L").get<double>(),
                        j.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::IoFailure, std::string("bad GridFunction JSON: ") + e.what());
  }
}

void write_grid(const std::string& path, const GridFunction& f,
                const std::string& format) {
  if (format == "csv")
    atomic_write(path, grid_to_csv(f));
  else if (format == "json")
    atomic_write(path, grid_to_json(f));
  else
    fail(ErrorKind::InvalidArgument, "unknown format " + format);
}

GridFunction read_grid(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return grid_from_json_text(text);
  return grid_from_csv_text(text);
}

std::string bound_report_to_json(const BoundReport& report) {
  nlohmann::json j;
  j["r0"] = report.r0;
  j["old_bound"] = report.old_bound;
  j["new_bound"] = report.new_bound;
  j["gap"] = report.gap;
  j["L"] = report.params.L;
  j["E"] = report.params.E;
  j["d"] = report.params.d;
  return j.dump(2) + "\n";
}

std::string variational_report_to_json(const VariationalReport& report) {
  nlohmann::json j;
  j["h"] = report.h;
  j["closed_form_value"] = report.closed_form_value;
  j["best_numeric_value"] = report.best_numeric_value;
  j["extremizer_value"] = report.extremizer_value;
  j["violation"] = report.violation;
  j["accepted"] = report.accepted;
  j["extremizer"] = {{"L", report.extremizer.period()},
                     {"n", report.extremizer.size()},
                     {"values", report.extremizer.values()}};
  return j.dump(2) + "\n";
}

std::string ode_trace_to_csv(const OdeTrace& trace) {
  std::ostringstream out;
  out << "t,q,alpha\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    out << format_double(trace.times[i]) << ',' << format_double(trace.q_values[i])
        << ',' << format_double(trace.alpha_values[i]) << '\n';
  return out.str();
}

std::string ode_trace_to_json(const OdeTrace& trace) {
  nlohmann::json j;
  j["t"] = trace.times;
  j["q"] = trace.q_values;
  j["alpha"] = trace.alpha_values;
  return j.dump(2) + "\n";
}

std::string snapshot_to_csv(const SubsolutionSnapshot& snapshot) {
  std::ostringstream out;
  out << "x,rho,m1,e,w\n";
  for (std::size_t j = 0; j < snapshot.rho.size(); ++j)
    out << format_double(snapshot.rho.x(j)) << ',' << format_double(snapshot.rho[j])
        << ',' << format_double(snapshot.m1[j]) << ','
        << format_double(snapshot.e[j]) << ',' << format_double(snapshot.w[j])
        << '\n';
  return out.str();
}

std::string snapshot_manifest_json(const SubsolutionSnapshot& snapshot, double T) {
  nlohmann::json j;
  j["t"] = snapshot.t;
  j["alpha"] = snapshot.alpha;
  j["lambda"] = snapshot.lambda;
  j["T"] = T;
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoFailure, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace mixlab
