/* Copyright 2026 The Identity Lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "idlab/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "idlab/error.hpp"

namespace idlab {

namespace {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.count = v.size();
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(v.size()));
  return m;
}

void add_unique(std::vector<std::string>& list, const std::string& s) {
  if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& header) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIoError, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == header, ErrorKind::kFormatError,
          path.string() + ": expected header '" + header + "'");
  const std::size_t width = split_csv(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    require(cells.size() == width, ErrorKind::kFormatError,
            path.string() + ": bad row '" + line + "'");
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::kFormatError, "not a number: '" + s + "'");
}

std::size_t to_size(const std::string& s) {
  const double v = to_double(s);
  require(v >= 0 && std::floor(v) == v, ErrorKind::kFormatError, "not a count: '" + s + "'");
  return static_cast<std::size_t>(v);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kIoError, "cannot write " + path.string());
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fixed(w, 0) + "\" height=\"" + fixed(h, 0) + "\" viewBox=\"0 0 " + fixed(w, 0) + " " +
         fixed(h, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" text-anchor=\"" + anchor + "\">" +
         escape_xml(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke = "black") {
  return "<line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y1) + "\" x2=\"" + fixed(x2) +
         "\" y2=\"" + fixed(y2) + "\" stroke=\"" + stroke + "\"/>\n";
}

std::string series_title(const TrialReport& r, const std::string& series) {
  for (const RatingRow& row : r.ratings)
    if (row.encoding == series)
      return series + " / " + row.model + " depth " + std::to_string(row.depth);
  return series;
}

}  // namespace

std::vector<WordAggregate> TrialReport::word_aggregates() const {
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const RatingRow& r : ratings) groups[{r.encoding, r.word}].push_back(r.rating);
  std::vector<WordAggregate> out;
  for (const std::string& s : series) {
    for (const std::string& w : words) {
      auto it = groups.find({s, w});
      if (it == groups.end()) continue;
      const Moments m = moments(it->second);
      out.push_back({s, w, m.mean, m.stddev, m.count});
    }
  }
  return out;
}

std::vector<CurveAggregate> TrialReport::test_curves() const {
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
  for (const LossRow& r : losses)
    if (r.split == "test") groups[{r.series, r.epoch}].push_back(r.loss);
  std::vector<CurveAggregate> out;
  for (const std::string& s : series) {
    for (auto it = groups.lower_bound({s, 0}); it != groups.end() && it->first.first == s; ++it) {
      const Moments m = moments(it->second);
      out.push_back({s, it->first.second, m.mean, m.stddev, m.count});
    }
  }
  return out;
}

double TrialReport::mean_rating(const std::string& s, const std::string& word) const {
  for (const WordAggregate& a : word_aggregates())
    if (a.series == s && a.word == word) return a.mean;
  fail(ErrorKind::kInvalidArgument, "no ratings for " + s + "/" + word);
}

double TrialReport::final_test_loss(const std::string& s) const {
  const auto curves = test_curves();
  const CurveAggregate* last = nullptr;
  for (const CurveAggregate& c : curves)
    if (c.series == s && (last == nullptr || c.epoch > last->epoch)) last = &c;
  require(last != nullptr, ErrorKind::kInvalidArgument, "no test loss for " + s);
  return last->mean;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_ratings_csv(const std::filesystem::path& path, const std::vector<RatingRow>& rows) {
  auto out = open_out(path);
  out << "trial,experiment,encoding,model,depth,word,rating\n";
  for (const RatingRow& r : rows)
    out << r.trial << ',' << r.experiment << ',' << r.encoding << ',' << r.model << ','
        << r.depth << ',' << r.word << ',' << format_number(r.rating) << '\n';
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<LossRow>& rows) {
  auto out = open_out(path);
  out << "trial,epoch,split,loss,series\n";
  for (const LossRow& r : rows)
    out << r.trial << ',' << r.epoch << ',' << r.split << ',' << format_number(r.loss) << ','
        << r.series << '\n';
}

void write_aggregates_csv(const std::filesystem::path& path,
                          const std::vector<WordAggregate>& rows) {
  auto out = open_out(path);
  out << "encoding,word,mean,std,trials\n";
  for (const WordAggregate& a : rows)
    out << a.series << ',' << a.word << ',' << format_number(a.mean) << ','
        << format_number(a.stddev) << ',' << a.count << '\n';
}

std::vector<RatingRow> read_ratings_csv(const std::filesystem::path& path) {
  std::vector<RatingRow> out;
  for (const auto& c : read_csv(path, "trial,experiment,encoding,model,depth,word,rating"))
    out.push_back({to_size(c[0]), c[1], c[2], c[3], to_size(c[4]), c[5], to_double(c[6])});
  return out;
}

std::vector<LossRow> read_loss_csv(const std::filesystem::path& path) {
  std::vector<LossRow> out;
  for (const auto& c : read_csv(path, "trial,epoch,split,loss,series"))
    out.push_back({to_size(c[0]), to_size(c[1]), c[2], to_double(c[3]), c[4]});
  return out;
}

std::vector<WordAggregate> read_aggregates_csv(const std::filesystem::path& path) {
  std::vector<WordAggregate> out;
  for (const auto& c : read_csv(path, "encoding,word,mean,std,trials"))
    out.push_back({c[0], c[1], to_double(c[2]), to_double(c[3]), to_size(c[4])});
  return out;
}

std::string render_bars_svg(const TrialReport& r) {
  require(!r.empty(), ErrorKind::kInvalidArgument, "empty report");
  const auto aggs = r.word_aggregates();
  const double panel_w = 80.0 + 60.0 * static_cast<double>(r.words.size());
  const double panel_h = 220.0;
  const double left = 50.0, top = 30.0, plot_h = 150.0;
  std::string svg = svg_open(panel_w + 20.0, panel_h * static_cast<double>(r.series.size()));
  for (std::size_t p = 0; p < r.series.size(); ++p) {
    const std::string& s = r.series[p];
    const double y0 = panel_h * static_cast<double>(p) + top;
    const double base = y0 + plot_h;
    svg += text(panel_w / 2.0, y0 - 10.0, series_title(r, s));
    svg += line(left, y0, left, base) + line(left, base, panel_w, base);
    for (double tick : {0.0, 0.5, 1.0}) {
      const double y = base - tick * plot_h;
      svg += line(left - 4.0, y, left, y) + text(left - 8.0, y + 4.0, fixed(tick, 1), "end");
    }
    for (std::size_t i = 0; i < r.words.size(); ++i) {
      const WordAggregate* a = nullptr;
      for (const WordAggregate& g : aggs)
        if (g.series == s && g.word == r.words[i]) a = &g;
      const double cx = left + 40.0 + 60.0 * static_cast<double>(i);
      svg += text(cx, base + 16.0, r.words[i]);
      if (a == nullptr) continue;
      const double h = std::clamp(a->mean, 0.0, 1.0) * plot_h;
      svg += "<rect x=\"" + fixed(cx - 18.0) + "\" y=\"" + fixed(base - h) +
             "\" width=\"36\" height=\"" + fixed(h) + "\" fill=\"" + kPalette[p % 6] +
             "\" fill-opacity=\"0.8\"><title>" + escape_xml(r.words[i]) + ": " +
             fixed(a->mean, 4) + " ± " + fixed(a->stddev, 4) + "</title></rect>\n";
      const double lo = base - std::clamp(a->mean - a->stddev, 0.0, 1.0) * plot_h;
      const double hi = base - std::clamp(a->mean + a->stddev, 0.0, 1.0) * plot_h;
      svg += line(cx, lo, cx, hi) + line(cx - 6.0, lo, cx + 6.0, lo) +
             line(cx - 6.0, hi, cx + 6.0, hi);
    }
  }
  return svg + "</svg>\n";
}

std::string render_loss_svg(const TrialReport& r) {
  require(!r.empty(), ErrorKind::kInvalidArgument, "empty report");
  const auto curves = r.test_curves();
  const double w = 640, h = 400, left = 60, right = 160, top = 30, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  std::size_t max_epoch = 1;
  double max_loss = 0.0;
  for (const CurveAggregate& c : curves) {
    max_epoch = std::max(max_epoch, c.epoch);
    max_loss = std::max(max_loss, c.mean + c.stddev);
  }
  if (max_loss <= 0.0) max_loss = 1.0;
  auto px = [&](double epoch) { return left + pw * (epoch - 1.0) / std::max<double>(1, max_epoch - 1); };
  auto py = [&](double loss) { return top + ph * (1.0 - std::clamp(loss / max_loss, 0.0, 1.0)); };
  std::string svg = svg_open(w, h);
  svg += text(left + pw / 2.0, 18.0, "test loss (" + r.experiment + ")");
  svg += line(left, top, left, top + ph) + line(left, top + ph, left + pw, top + ph);
  svg += text(left + pw / 2.0, h - 12.0, "epoch");
  for (int k = 0; k <= 4; ++k) {
    const double v = max_loss * k / 4.0;
    svg += line(left - 4, py(v), left, py(v)) + text(left - 8, py(v) + 4, fixed(v, 2), "end");
    const double e = 1.0 + (max_epoch - 1.0) * k / 4.0;
    svg += text(px(e), top + ph + 16, fixed(std::round(e), 0));
  }
  for (std::size_t p = 0; p < r.series.size(); ++p) {
    std::vector<const CurveAggregate*> pts;
    for (const CurveAggregate& c : curves)
      if (c.series == r.series[p]) pts.push_back(&c);
    if (pts.empty()) continue;
    // Keep at most ~500 vertices per curve.
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 500);
    std::vector<const CurveAggregate*> kept;
    for (std::size_t i = 0; i < pts.size(); i += stride) kept.push_back(pts[i]);
    if (kept.back() != pts.back()) kept.push_back(pts.back());
    std::string upper, lower, mean;
    for (const CurveAggregate* c : kept) {
      upper += fixed(px(double(c->epoch))) + "," + fixed(py(c->mean + c->stddev)) + " ";
      mean += fixed(px(double(c->epoch))) + "," + fixed(py(c->mean)) + " ";
    }
    for (auto it = kept.rbegin(); it != kept.rend(); ++it)
      lower += fixed(px(double((*it)->epoch))) + "," + fixed(py((*it)->mean - (*it)->stddev)) + " ";
    const char* color = kPalette[p % 6];
    svg += "<polygon points=\"" + upper + lower + "\" fill=\"" + color +
           "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    svg += "<polyline points=\"" + mean + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 20.0 * static_cast<double>(p + 1);
    svg += "<line x1=\"" + fixed(left + pw + 15) + "\" y1=\"" + fixed(ly) + "\" x2=\"" +
           fixed(left + pw + 40) + "\" y2=\"" + fixed(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += text(left + pw + 45, ly + 4, r.series[p], "start");
  }
  return svg + "</svg>\n";
}

void write_text(const std::filesystem::path& path, const std::string& s) {
  auto out = open_out(path);
  out << s;
  require(out.good(), ErrorKind::kIoError, "write failed: " + path.string());
}

void emit_report(const TrialReport& report, const std::filesystem::path& dir) {
  require(!report.empty(), ErrorKind::kInvalidArgument, "empty report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorKind::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  write_ratings_csv(dir / "ratings.csv", report.ratings);
  write_loss_csv(dir / "loss.csv", report.losses);
  write_aggregates_csv(dir / "aggregates.csv", report.word_aggregates());
  write_text(dir / "bars.svg", render_bars_svg(report));
  write_text(dir / "loss.svg", render_loss_svg(report));
  write_text(dir / "manifest.json", report.manifest.dump(2) + "\n");
}

TrialReport load_report(const std::filesystem::path& dir) {
  TrialReport r;
  r.ratings = read_ratings_csv(dir / "ratings.csv");
  if (std::filesystem::exists(dir / "loss.csv")) r.losses = read_loss_csv(dir / "loss.csv");
  if (std::filesystem::exists(dir / "manifest.json")) {
    std::ifstream in(dir / "manifest.json");
    try {
      in >> r.manifest;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kFormatError, "manifest.json: " + std::string(e.what()));
    }
  }
  for (const RatingRow& row : r.ratings) {
    r.experiment = row.experiment;
    add_unique(r.series, row.encoding);
    add_unique(r.words, row.word);
  }
  if (std::filesystem::exists(dir / "aggregates.csv")) {
    const auto stored = read_aggregates_csv(dir / "aggregates.csv");
    const auto fresh = r.word_aggregates();
    require(stored.size() == fresh.size(), ErrorKind::kFormatError,
            "aggregates.csv row count does not match ratings.csv");
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      const bool same = stored[i].series == fresh[i].series && stored[i].word == fresh[i].word &&
                        stored[i].count == fresh[i].count &&
                        std::abs(stored[i].mean - fresh[i].mean) <= 1e-12 &&
                        std::abs(stored[i].stddev - fresh[i].stddev) <= 1e-12;
      require(same, ErrorKind::kFormatError,
              "aggregates.csv disagrees with ratings.csv at " + fresh[i].series + "/" +
                  fresh[i].word);
    }
  }
  return r;
}

}  // namespace idlab
