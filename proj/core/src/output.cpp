#include "extphase/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include "extphase/errors.hpp"

namespace extphase {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_field(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad field '" +
                  std::string(field) + "'");
  }
  return value;
}

// ---------------------------------------------------------------------------
// SVG line charts
// ---------------------------------------------------------------------------

struct Series {
  std::string label;
  const std::vector<double>* x;
  const std::vector<double>* y;
};

struct Panel {
  std::string title;
  std::vector<Series> series;
};

constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#9467bd", "#ff7f0e", "#17becf"};
constexpr double kPanelWidth = 380.0;
constexpr double kPanelHeight = 300.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 15.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 40.0;
constexpr std::size_t kMaxPoints = 4000;

std::string svg_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("0");
}

void write_panel(std::ostream& out, const Panel& panel, double x0, double y0) {
  double x_max = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.y->size(); ++i) {
      x_max = std::max(x_max, (*s.x)[i]);
      const double v = (*s.y)[i];
      if (v > 0.0 && std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }

  const double plot_w = kPanelWidth - kMarginLeft - kMarginRight;
  const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;
  const double left = x0 + kMarginLeft;
  const double top = y0 + kMarginTop;

  out << "<g>\n";
  out << "<text x=\"" << fixed(x0 + kPanelWidth / 2) << "\" y=\"" << fixed(y0 + 18)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << svg_escape(panel.title) << "</text>\n";
  out << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(plot_w)
      << "\" height=\"" << fixed(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

  if (!(lo <= hi)) {
    out << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(top + plot_h / 2)
        << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#666\">all values zero</text>\n";
    out << "</g>\n";
    return;
  }
  double dec_lo = std::floor(std::log10(lo));
  double dec_hi = std::ceil(std::log10(hi));
  if (dec_hi <= dec_lo) {
    dec_hi = dec_lo + 1.0;
  }
  if (x_max <= 0.0) {
    x_max = 1.0;
  }
  const auto px = [&](double x) { return left + plot_w * x / x_max; };
  const auto py = [&](double v) {
    return top + plot_h * (dec_hi - std::log10(v)) / (dec_hi - dec_lo);
  };

  const int decades = static_cast<int>(dec_hi - dec_lo);
  const int label_every = std::max(1, decades / 8);
  for (int k = 0; k <= decades; k += label_every) {
    const double e = dec_lo + k;
    const double yy = py(std::pow(10.0, e));
    out << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(yy) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(yy)
        << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << fixed(left - 4) << "\" y=\"" << fixed(yy + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">1e" << static_cast<int>(e) << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_max * k / 4.0;
    out << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(top + plot_h + 14)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << format_double(xv).substr(0, 8)
        << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(top + plot_h + 30)
      << "\" text-anchor=\"middle\" font-size=\"11\">t</text>\n";

  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const auto& s = panel.series[si];
    const std::size_t n = s.y->size();
    const std::size_t step = std::max<std::size_t>(1, (n + kMaxPoints - 1) / kMaxPoints);
    const char* color = kColors[si % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < n; i += step) {
      const double v = (*s.y)[i];
      if (v > 0.0 && std::isfinite(v)) {
        out << fixed(px((*s.x)[i])) << ',' << fixed(py(v)) << ' ';
      }
    }
    out << "\"/>\n";
    if (panel.series.size() > 1 || !s.label.empty()) {
      const double ly = top + 14.0 + 14.0 * static_cast<double>(si);
      out << "<text x=\"" << fixed(left + plot_w - 6) << "\" y=\"" << fixed(ly)
          << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << color << "\">"
          << svg_escape(s.label) << "</text>\n";
    }
  }
  out << "</g>\n";
}

void write_svg(const std::vector<Panel>& panels, const std::string& title,
               const std::filesystem::path& path) {
  const std::size_t columns = std::min<std::size_t>(3, std::max<std::size_t>(1, panels.size()));
  const std::size_t rows_n = (panels.size() + columns - 1) / columns;
  const double header = title.empty() ? 0.0 : 26.0;
  const double width = kPanelWidth * static_cast<double>(columns);
  const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, rows_n)) + header;

  std::ofstream out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
      << "\" height=\"" << fixed(height, 0) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << fixed(width / 2) << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-size=\"15\">" << svg_escape(title) << "</text>\n";
  }
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const double x0 = kPanelWidth * static_cast<double>(i % columns);
    const double y0 = header + kPanelHeight * static_cast<double>(i / columns);
    write_panel(out, panels[i], x0, y0);
  }
  out << "</svg>\n";
  finish_write(out, path);
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc()) {
    throw IoError("format_double: conversion failed");
  }
  return std::string(buf.data(), ptr);
}

void write_csv(const TrajectoryRecord& record, std::ostream& out) {
  out << "step,t,defect_norm,energy_rel_err";
  for (const auto& name : record.invariant_names) {
    out << ',' << name << "_rel_err";
  }
  out << ",itr,vf_evals";
  const bool with_state = !record.states.empty();
  if (with_state) {
    for (int i = 1; i <= record.dim; ++i) {
      out << ",q" << i;
    }
    for (int i = 1; i <= record.dim; ++i) {
      out << ",p" << i;
    }
  }
  out << '\n';

  for (std::size_t r = 0; r < record.rows(); ++r) {
    out << record.steps[r] << ',' << format_double(record.times[r]) << ','
        << format_double(record.defect[r]) << ',' << format_double(record.energy_rel_err[r]);
    for (const auto& series : record.invariant_drift) {
      out << ',' << format_double(series[r]);
    }
    out << ',' << record.itr[r] << ',' << record.vf_evals[r];
    if (with_state) {
      for (Eigen::Index i = 0; i < record.states[r].size(); ++i) {
        out << ',' << format_double(record.states[r][i]);
      }
    }
    out << '\n';
  }
}

void emit_csv(const TrajectoryRecord& record, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  write_csv(record, out);
  finish_write(out, path);
}

TrajectoryRecord read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError(path.string() + ": missing header");
  }
  const auto header = split(line, ',');
  const auto itr_col = std::find(header.begin(), header.end(), "itr") - header.begin();
  if (header.size() < 6 || header[0] != "step" || header[1] != "t" ||
      header[2] != "defect_norm" || header[3] != "energy_rel_err" ||
      static_cast<std::size_t>(itr_col) + 1 >= header.size() ||
      header[static_cast<std::size_t>(itr_col) + 1] != "vf_evals") {
    throw IoError(path.string() + ": unexpected header");
  }

  TrajectoryRecord rec;
  constexpr std::string_view suffix = "_rel_err";
  for (auto c = 4; c < itr_col; ++c) {
    std::string_view name = header[static_cast<std::size_t>(c)];
    if (name.size() > suffix.size() && name.substr(name.size() - suffix.size()) == suffix) {
      name.remove_suffix(suffix.size());
    }
    rec.invariant_names.emplace_back(name);
  }
  const std::size_t n_inv = rec.invariant_names.size();
  rec.invariant_drift.resize(n_inv);
  const std::size_t state_cols = header.size() - static_cast<std::size_t>(itr_col) - 2;
  if (state_cols % 2 != 0) {
    throw IoError(path.string() + ": odd number of state columns");
  }
  rec.dim = static_cast<int>(state_cols / 2);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != header.size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " fields");
    }
    rec.steps.push_back(parse_field<long long>(f[0], path, line_no));
    rec.times.push_back(parse_field<double>(f[1], path, line_no));
    rec.defect.push_back(parse_field<double>(f[2], path, line_no));
    rec.energy_rel_err.push_back(parse_field<double>(f[3], path, line_no));
    for (std::size_t k = 0; k < n_inv; ++k) {
      rec.invariant_drift[k].push_back(parse_field<double>(f[4 + k], path, line_no));
    }
    rec.itr.push_back(parse_field<int>(f[4 + n_inv], path, line_no));
    rec.vf_evals.push_back(parse_field<std::uint64_t>(f[5 + n_inv], path, line_no));
    if (state_cols > 0) {
      Vector z(static_cast<Eigen::Index>(state_cols));
      for (std::size_t i = 0; i < state_cols; ++i) {
        z[static_cast<Eigen::Index>(i)] = parse_field<double>(f[6 + n_inv + i], path, line_no);
      }
      rec.states.push_back(std::move(z));
    }
  }
  rec.completed_steps = rec.steps.empty() ? 0 : rec.steps.back();
  rec.total_steps = rec.completed_steps;
  return rec;
}

void emit_svg(const TrajectoryRecord& record, const std::filesystem::path& path) {
  std::vector<Panel> panels;
  panels.push_back({"defect norm", {{"", &record.times, &record.defect}}});
  panels.push_back({"energy relative error", {{"", &record.times, &record.energy_rel_err}}});
  for (std::size_t k = 0; k < record.invariant_names.size(); ++k) {
    panels.push_back({record.invariant_names[k] + " relative error",
                      {{"", &record.times, &record.invariant_drift[k]}}});
  }
  write_svg(panels, record.label, path);
}

void emit_comparison_svg(const std::vector<TrajectoryRecord>& records,
                         const std::filesystem::path& path, const std::string& title) {
  if (records.empty()) {
    throw InvalidArgument("emit_comparison_svg: no records");
  }
  std::vector<Panel> panels;
  Panel defect{"defect norm", {}};
  for (const auto& r : records) {
    defect.series.push_back({r.label, &r.times, &r.defect});
  }
  panels.push_back(std::move(defect));
  const auto& names = records.front().invariant_names;
  for (std::size_t k = 0; k < names.size(); ++k) {
    Panel p{names[k] + " relative error", {}};
    for (const auto& r : records) {
      if (k < r.invariant_drift.size()) {
        p.series.push_back({r.label, &r.times, &r.invariant_drift[k]});
      }
    }
    panels.push_back(std::move(p));
  }
  write_svg(panels, title, path);
}

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, std::ostream& out) {
  out << "method,order,dt,t_end,tol,time_s,itr_avg,vf_avg,converged_steps,total_steps\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.order << ',' << format_double(r.dt) << ','
        << format_double(r.t_end) << ',' << format_double(r.tol) << ','
        << format_double(r.time_s) << ',' << format_double(r.itr_avg) << ','
        << format_double(r.vf_avg) << ',' << r.converged_steps << ',' << r.total_steps << '\n';
  }
}

void emit_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  write_benchmark_csv(rows, out);
  finish_write(out, path);
}

}  // namespace extphase
