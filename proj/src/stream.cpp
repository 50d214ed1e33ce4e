#include "robustf2/stream.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace robustf2 {

std::vector<double> f2_prefix_values(const StreamSegment& stream, Eigen::Index n) {
  std::vector<double> values;
  values.reserve(stream.updates.size() + 1);
  FrequencyVector fv(n);
  double f2 = 0.0;
  values.push_back(0.0);
  for (const Update& u : stream.updates) {
    if (u.item < 0 || u.item >= n) {
      throw std::domain_error("f2_prefix_values: item outside domain");
    }
    // (c+d)^2 - c^2 = d*(2c+d); keeps the scan O(1) per update.
    const double c = static_cast<double>(fv.counts[u.item]);
    const double d = static_cast<double>(u.delta);
    f2 += d * (2.0 * c + d);
    fv.counts[u.item] += u.delta;
    values.push_back(f2);
  }
  return values;
}

Eigen::Index required_domain(const StreamSegment& stream) {
  std::int64_t max_item = -1;
  for (const Update& u : stream.updates) max_item = std::max(max_item, u.item);
  return static_cast<Eigen::Index>(max_item + 1);
}

void write_stream(std::ostream& out, const StreamSegment& stream) {
  for (const Update& u : stream.updates) {
    out << u.item << ' ' << u.delta << '\n';
  }
}

void write_stream_file(const std::string& path, const StreamSegment& stream) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open stream file for writing: " + path);
  write_stream(out, stream);
}

StreamSegment read_stream(std::istream& in) {
  StreamSegment stream;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::int64_t item = 0, delta = 0;
    if (!(ls >> item)) continue;  // blank or comment-only line
    if (!(ls >> delta)) {
      throw std::runtime_error("stream line " + std::to_string(line_no) + ": missing delta");
    }
    int enable = 0;
    ls >> enable;  // optional third column, tolerated and ignored here
    if (delta == 0) {
      throw std::runtime_error("stream line " + std::to_string(line_no) + ": zero delta");
    }
    stream.updates.push_back(Update{item, delta});
  }
  stream.start = 0;
  stream.end = stream.size();
  return stream;
}

StreamSegment read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file: " + path);
  return read_stream(in);
}

void write_tde_stream(std::ostream& out, const std::vector<TdeUpdate>& stream) {
  for (const TdeUpdate& u : stream) {
    out << u.update.item << ' ' << u.update.delta << ' ' << int(u.enable) << '\n';
  }
}

std::vector<TdeUpdate> read_tde_stream(std::istream& in) {
  std::vector<TdeUpdate> stream;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::int64_t item = 0, delta = 0;
    int enable = 0;
    if (!(ls >> item)) continue;
    if (!(ls >> delta) || delta == 0) {
      throw std::runtime_error("tde stream line " + std::to_string(line_no) + ": bad delta");
    }
    ls >> enable;
    stream.push_back(TdeUpdate{Update{item, delta}, enable != 0});
  }
  return stream;
}

}  // namespace robustf2
