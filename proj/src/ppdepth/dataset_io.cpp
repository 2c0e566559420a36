#include "ppdepth/dataset_io.hpp"

#include <istream>
#include <sstream>
#include <vector>

#include "ppdepth/textio.hpp"

namespace ppdepth {

namespace {

constexpr std::string_view kWhitespace = " \t\r\f\v";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(kWhitespace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kWhitespace);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto b = s.find_first_not_of(kWhitespace, pos);
    if (b == std::string_view::npos) break;
    auto e = s.find_first_of(kWhitespace, b);
    if (e == std::string_view::npos) e = s.size();
    out.push_back(s.substr(b, e - b));
    pos = e;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  raise(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Dataset parse_dataset(std::istream& in, const TimeDomain& domain) {
  Dataset out(domain);
  // tribool: -1 undecided, 0 unlabeled, 1 labeled
  int labeled_mode = -1;
  std::string raw;
  std::size_t line_no = 0;

  auto check_mode = [&](bool labeled, std::size_t no) {
    if (labeled_mode == -1) {
      labeled_mode = labeled ? 1 : 0;
    } else if (labeled_mode != (labeled ? 1 : 0)) {
      parse_fail(no, "labeled and unlabeled lines cannot be mixed");
    }
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const bool has_comment = raw.find('#') != std::string::npos;
    std::string_view line = raw;
    if (has_comment) line = line.substr(0, line.find('#'));
    line = trim(line);
    if (line.empty()) {
      if (has_comment) continue;  // comment-only line, not a realization
      check_mode(false, line_no);
      out.add(Realization(domain, {}));
      continue;
    }

    auto tokens = split_tokens(line);
    std::string label;
    std::size_t first_event = 0;
    if (!tokens.empty() && tokens[0].back() == ':') {
      auto name = tokens[0].substr(0, tokens[0].size() - 1);
      if (name.empty()) parse_fail(line_no, "empty label");
      label.assign(name);
      first_event = 1;
    }

    std::vector<double> events;
    events.reserve(tokens.size() - first_event);
    for (std::size_t i = first_event; i < tokens.size(); ++i) {
      auto v = parse_double(tokens[i]);
      if (!v) parse_fail(line_no, "bad numeric token '" + std::string(tokens[i]) + "'");
      if (*v < domain.t1 || *v > domain.t2) {
        parse_fail(line_no, "event " + std::string(tokens[i]) +
                                " outside domain [" + format_double(domain.t1) +
                                ", " + format_double(domain.t2) + "]");
      }
      if (!events.empty() && *v < events.back()) {
        parse_fail(line_no, "event times must be nondecreasing");
      }
      events.push_back(*v);
    }

    check_mode(!label.empty(), line_no);
    Realization r(domain, std::move(events));
    if (label.empty()) {
      out.add(std::move(r));
    } else {
      out.add(std::move(r), std::move(label));
    }
  }
  return out;
}

Dataset parse_dataset(std::string_view text, const TimeDomain& domain) {
  std::istringstream in{std::string(text)};
  return parse_dataset(in, domain);
}

std::string render_dataset(const Dataset& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::string line;
    if (d.labeled()) line = d.label(i) + ":";
    for (double t : d.at(i).events()) {
      if (!line.empty()) line += ' ';
      line += format_double(t);
    }
    out += line;
    out += '\n';
  }
  return out;
}

Dataset read_dataset_file(const std::string& path, const TimeDomain& domain) {
  const std::string text = read_text_file(path);
  return parse_dataset(std::string_view(text), domain);
}

void write_dataset_file(const std::string& path, const Dataset& d) {
  write_text_file(path, render_dataset(d));
}

}  // namespace ppdepth
