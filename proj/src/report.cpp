#include "latentcl/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "latentcl/errors.hpp"

namespace latentcl {

namespace {

const char* kMetrics[] = {"r_a", "r_ba", "r_b_on_b", "r_null", "forgetting", "ratio", "proj_energy"};
const char* kBoundNames[] = {"single", "terminal", "forgetting", "ratio", "projection"};

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw IoError("records.csv: bad number '" + s + "'");
  }
  if (used != s.size()) throw IoError("records.csv: bad number '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw IoError("records.csv: bad integer '" + s + "'");
  }
  if (used != s.size()) throw IoError("records.csv: bad integer '" + s + "'");
  return v;
}

BoundFlag parse_flag(const std::string& s) {
  if (s == "ok") return BoundFlag::satisfied;
  if (s == "violated") return BoundFlag::violated;
  if (s == "NA") return BoundFlag::not_applicable;
  throw IoError("records.csv: bad bound flag '" + s + "'");
}

const std::array<BoundFlag BoundFlags::*, 5> kFlagMembers = {&BoundFlags::single, &BoundFlags::terminal,
                                                             &BoundFlags::forgetting, &BoundFlags::ratio,
                                                             &BoundFlags::projection};

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "variant",     "point",     "d",          "n",         "p",          "gamma",           "theta_sq",
      "trial",       "status",    "r_a",        "r_ba",      "r_b_on_b",   "r_null",          "forgetting",
      "ratio",       "proj_energy", "dual_path_gap", "emp_a", "se_a",      "emp_ba",          "se_ba",
      "emp_b_on_b",  "se_b_on_b", "emp_null",   "se_null",   "flag_single", "flag_terminal", "flag_forgetting",
      "flag_ratio",  "flag_projection", "premise_ok", "error"};
  return cols;
}

std::string record_row(const TrialRecord& r) {
  std::vector<std::string> cells;
  cells.reserve(record_columns().size());
  cells.push_back(to_string(r.variant));
  cells.push_back(std::to_string(r.point));
  cells.push_back(std::to_string(r.d));
  cells.push_back(std::to_string(r.n));
  cells.push_back(std::to_string(r.p));
  cells.push_back(format_number(r.gamma));
  cells.push_back(format_number(r.theta_sq));
  cells.push_back(std::to_string(r.trial));
  cells.push_back(r.failed ? "failed" : "ok");
  const auto metric = [&](double v) { return r.failed ? std::string("NA") : format_number(v); };
  for (double v : {r.r_a, r.r_ba, r.r_b_on_b, r.r_null, r.forgetting}) cells.push_back(metric(v));
  cells.push_back(r.failed ? "NA" : optional_number(r.ratio));
  cells.push_back(metric(r.proj_energy));
  cells.push_back(metric(r.dual_path_gap));
  for (const EmpiricalRisk* e : {&r.emp_a, &r.emp_ba, &r.emp_b_on_b, &r.emp_null}) {
    cells.push_back(metric(e->mean));
    cells.push_back(metric(e->se));
  }
  for (auto member : kFlagMembers) cells.push_back(to_string(r.flags.*member));
  cells.push_back(r.premise_ok ? "1" : "0");
  cells.push_back(sanitize(r.error));

  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::string out;
  const auto& cols = record_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const TrialRecord& r : records) {
    out += record_row(r);
    out += '\n';
  }
  return out;
}

std::vector<TrialRecord> parse_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("records.csv: missing header");
  const auto& cols = record_columns();
  if (split(line) != cols) throw IoError("records.csv: unexpected header");

  std::vector<TrialRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> c = split(line);
    if (c.size() != cols.size()) {
      throw IoError("records.csv line " + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) +
                    " cells");
    }
    TrialRecord r;
    if (c[0] == "latent") {
      r.variant = ModelVariant::latent;
    } else if (c[0] == "surrogate") {
      r.variant = ModelVariant::surrogate;
    } else {
      throw IoError("records.csv: bad variant '" + c[0] + "'");
    }
    r.point = static_cast<std::size_t>(parse_integer(c[1]));
    r.d = parse_integer(c[2]);
    r.n = parse_integer(c[3]);
    r.p = parse_integer(c[4]);
    r.gamma = parse_number(c[5]);
    r.theta_sq = parse_number(c[6]);
    r.trial = static_cast<std::uint64_t>(parse_integer(c[7]));
    if (c[8] != "ok" && c[8] != "failed") throw IoError("records.csv: bad status '" + c[8] + "'");
    r.failed = c[8] == "failed";
    if (!r.failed) {
      r.r_a = parse_number(c[9]);
      r.r_ba = parse_number(c[10]);
      r.r_b_on_b = parse_number(c[11]);
      r.r_null = parse_number(c[12]);
      r.forgetting = parse_number(c[13]);
      if (c[14] != "NA") r.ratio = parse_number(c[14]);
      r.proj_energy = parse_number(c[15]);
      r.dual_path_gap = parse_number(c[16]);
      std::size_t k = 17;
      for (EmpiricalRisk* e : {&r.emp_a, &r.emp_ba, &r.emp_b_on_b, &r.emp_null}) {
        e->mean = parse_number(c[k++]);
        e->se = parse_number(c[k++]);
      }
    }
    for (std::size_t i = 0; i < kFlagMembers.size(); ++i) r.flags.*kFlagMembers[i] = parse_flag(c[25 + i]);
    r.premise_ok = c[30] == "1";
    r.error = c[31];
    out.push_back(std::move(r));
  }
  return out;
}

const std::vector<std::string>& aggregate_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"variant", "point",    "d",      "n",      "p",      "gamma",
                                  "theta_sq", "premise_ok", "trials", "failed", "flagged"};
    for (const char* m : kMetrics) {
      for (const char* s : {"mean", "se", "median", "q10", "q90"}) c.push_back(std::string(m) + "_" + s);
    }
    c.push_back("ratio_undefined");
    for (const char* b : kBoundNames) {
      c.push_back(std::string("bound_") + b);
      c.push_back(std::string("freq_") + b);
      c.push_back(std::string("applicable_") + b);
    }
    for (const char* s : {"mc_pairs", "mc_within", "max_dual_path_gap"}) c.push_back(s);
    return c;
  }();
  return cols;
}

std::string aggregate_csv(const AggregateReport& report) {
  std::ostringstream out;
  const auto& cols = aggregate_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const PointAggregate& pt : report.points) {
    const BoundSheet sheet = make_bound_sheet(static_cast<double>(pt.d), static_cast<double>(pt.n),
                                              static_cast<double>(pt.p), pt.gamma, pt.theta_sq);
    out << to_string(pt.variant) << ',' << pt.point << ',' << pt.d << ',' << pt.n << ',' << pt.p << ','
        << format_number(pt.gamma) << ',' << format_number(pt.theta_sq) << ',' << (pt.premise_ok ? 1 : 0) << ','
        << pt.trials << ',' << pt.failed << ',' << (pt.flagged ? 1 : 0);
    for (const char* m : kMetrics) {
      const MetricSummary& s = pt.metric(m);
      for (double v : {s.mean, s.se, s.median, s.q10, s.q90}) out << ',' << format_number(v);
    }
    out << ',' << pt.ratio_undefined;
    const std::pair<std::optional<double>, const BoundFrequency*> bounds[] = {
        {sheet.b_single, &pt.single},
        {sheet.b_terminal, &pt.terminal},
        {sheet.b_forgetting, &pt.forgetting_bound},
        {sheet.b_ratio, &pt.ratio_bound},
        {sheet.b_proj, &pt.projection}};
    for (const auto& [bound, freq] : bounds) {
      out << ',' << optional_number(bound) << ',' << optional_number(freq->frequency()) << ','
          << freq->applicable;
    }
    out << ',' << pt.mc_pairs << ',' << pt.mc_within << ',' << format_number(pt.max_dual_path_gap) << '\n';
  }
  return out.str();
}

std::string sweep_svg(const AggregateReport& report) {
  constexpr double kWidth = 720, kHeight = 460;
  constexpr double kLeft = 80, kRight = 180, kTop = 30, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  for (const PointAggregate& pt : report.points) {
    for (const char* m : {"r_a", "r_ba", "r_b_on_b", "ratio"}) {
      const double v = pt.metric(m).median;
      if (!(v > 0.0) || !std::isfinite(v)) continue;
      std::string label = std::string("median ") + m;
      if (report.points.front().variant != pt.variant || pt.variant == ModelVariant::surrogate) {
        label += " (" + to_string(pt.variant) + ")";
      }
      auto [it, inserted] = index.try_emplace(label, series.size());
      if (inserted) series.push_back({label, {}});
      series[it->second].pts.emplace_back(static_cast<double>(pt.p), v);
    }
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const Series& s : series) {
    for (auto [x, y] : s.pts) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  }
  if (series.empty()) xmin = 0, xmax = 1, ymin = -1, ymax = 0;
  xmin = std::floor(xmin * 10.0) / 10.0;
  xmax = std::ceil(xmax * 10.0) / 10.0;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const auto sx = [&](double x) { return kLeft + (std::log10(x) - xmin) / (xmax - xmin) * plot_w; };
  const auto sy = [&](double y) { return kTop + (ymax - std::log10(y)) / (ymax - ymin) * plot_h; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
    const double y = sy(std::pow(10.0, e));
    o << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << y
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  std::vector<double> ticks;
  for (const Series& s : series) {
    for (auto [x, y] : s.pts) ticks.push_back(x);
  }
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  for (double x : ticks) {
    o << "<line x1=\"" << sx(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << sx(x) << "\" y2=\""
      << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << sx(x) << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
      << static_cast<long long>(x) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\">p (log scale)</text>\n";
  o << "<text transform=\"translate(18," << kTop + plot_h / 2
    << ") rotate(-90)\" text-anchor=\"middle\">median (log scale)</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  for (std::size_t i = 0; i < series.size(); ++i) {
    Series s = series[i];
    std::sort(s.pts.begin(), s.pts.end());
    const char* color = colors[i % std::size(colors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.pts.size(); ++k) {
      o << (k ? " " : "") << sx(s.pts[k].first) << ',' << sy(s.pts[k].second);
    }
    o << "\"/>\n";
    for (auto [x, y] : s.pts) {
      o << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    const double lx = kLeft + plot_w + 12;
    o << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly << "\" stroke=\""
      << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

nlohmann::json check_to_json(const CheckResult& check) {
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [name, value] : check.metrics) {
    metrics[name] = std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
  }
  return {{"id", check.id},
          {"status", to_string(check.status)},
          {"detail", check.detail},
          {"seconds", check.seconds},
          {"metrics", metrics}};
}

nlohmann::json summary_json(const std::vector<CheckResult>& checks, const SweepResult& sweep,
                            const nlohmann::json& config_echo, const RunTiming& timing) {
  nlohmann::json out;
  bool all_passed = true;
  nlohmann::json list = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    all_passed = all_passed && c.ok();
    list.push_back(check_to_json(c));
  }
  std::size_t failed = 0, flagged = 0;
  for (const TrialRecord& r : sweep.records) failed += r.failed ? 1 : 0;
  nlohmann::json points = nlohmann::json::array();
  for (const PointAggregate& pt : sweep.report.points) {
    flagged += pt.flagged ? 1 : 0;
    const auto med = [](const MetricSummary& s) {
      return std::isfinite(s.median) ? nlohmann::json(s.median) : nlohmann::json(nullptr);
    };
    points.push_back({{"variant", to_string(pt.variant)},
                      {"point", pt.point},
                      {"d", pt.d},
                      {"n", pt.n},
                      {"p", pt.p},
                      {"gamma", pt.gamma},
                      {"premise_ok", pt.premise_ok},
                      {"trials", pt.trials},
                      {"failed", pt.failed},
                      {"median_r_a", med(pt.r_a)},
                      {"median_r_ba", med(pt.r_ba)},
                      {"median_ratio", med(pt.ratio)},
                      {"ratio_undefined", pt.ratio_undefined}});
  }
  out["all_passed"] = all_passed;
  out["checks"] = list;
  out["sweep"] = {{"records", sweep.records.size()},
                  {"failed_trials", failed},
                  {"flagged_points", flagged},
                  {"points", points}};
  out["timing"] = {{"checks_seconds", timing.checks_seconds},
                   {"sweep_seconds", timing.sweep_seconds},
                   {"total_seconds", timing.total_seconds},
                   {"mean_trial_seconds", timing.mean_trial_seconds}};
  out["config"] = config_echo;
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

}  // namespace latentcl
