#include "testit/error.hpp"
#include "testit/results.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace testit {
namespace {

std::optional<double> as_number(const std::string& s) {
  double v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

std::vector<std::string> tag_columns(const CampaignDatabase& db) {
  std::vector<std::string> cols;
  for (const RunRecord& r : db.records) {
    for (const auto& [k, _] : r.tags) {
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    }
  }
  return cols;
}

// Sort value of one record as text; built-in keys first, then tags.
std::string key_text(const RunRecord& r, const std::string& key) {
  if (key == "iteration") return std::to_string(r.iteration);
  if (key == "appName") return r.appName;
  if (key == "passed") return r.passed ? "1" : "0";
  if (key == "wallTime") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", r.wallTime);
    return buf;
  }
  const std::string* v = find_tag(r.tags, key);
  return v ? *v : std::string();
}

}  // namespace

std::vector<std::string> valid_sort_keys(const CampaignDatabase& db) {
  std::vector<std::string> keys(std::begin(kRecordSortKeys), std::end(kRecordSortKeys));
  for (auto& tag : tag_columns(db)) {
    if (std::find(keys.begin(), keys.end(), tag) == keys.end()) keys.push_back(std::move(tag));
  }
  return keys;
}

std::vector<std::size_t> sort_order(const CampaignDatabase& db,
                                    const std::optional<std::string>& sortKey, bool descending) {
  std::vector<std::size_t> order(db.records.size());
  std::iota(order.begin(), order.end(), 0);
  if (!sortKey) {
    if (descending) std::reverse(order.begin(), order.end());
    return order;
  }

  auto keys = valid_sort_keys(db);
  if (std::find(keys.begin(), keys.end(), *sortKey) == keys.end()) {
    std::string list;
    for (const auto& k : keys) list += (list.empty() ? "" : ", ") + k;
    throw Error(ErrorCode::kUnknownSortKey, "'" + *sortKey + "' (valid keys: " + list + ")", "report");
  }

  std::vector<std::string> text;
  text.reserve(db.records.size());
  for (const RunRecord& r : db.records) text.push_back(key_text(r, *sortKey));

  std::vector<double> numbers;
  bool numeric = true;
  for (const auto& t : text) {
    auto v = as_number(t);
    if (!v) {
      numeric = false;
      break;
    }
    numbers.push_back(*v);
  }

  if (numeric) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return descending ? numbers[a] > numbers[b] : numbers[a] < numbers[b];
    });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return descending ? text[a] > text[b] : text[a] < text[b];
    });
  }
  return order;
}

std::string render_report(const CampaignDatabase& db, const std::optional<std::string>& sortKey,
                          bool descending) {
  const auto order = sort_order(db, sortKey, descending);
  const auto tags = tag_columns(db);

  std::vector<std::string> header{"iteration", "appName", "bindings"};
  header.insert(header.end(), tags.begin(), tags.end());
  header.push_back("passed");
  header.push_back("wallTime");

  std::vector<std::vector<std::string>> rows;
  std::size_t passed = 0;
  for (std::size_t idx : order) {
    const RunRecord& r = db.records[idx];
    std::vector<std::string> row{std::to_string(r.iteration), r.appName, r.bindings.to_string()};
    for (const auto& t : tags) {
      const std::string* v = find_tag(r.tags, t);
      row.push_back(v ? *v : "-");
    }
    row.push_back(r.passed ? "PASS" : "FAIL");
    row.push_back(format_seconds(r.wallTime));
    rows.push_back(std::move(row));
    passed += r.passed ? 1 : 0;
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) line += "  ";
      line += cells[c];
      if (c + 1 < cells.size()) line.append(width[c] - cells[c].size(), ' ');
    }
    out << line << '\n';
  };
  emit(header);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& row : rows) emit(row);
  out << db.records.size() << " records, " << passed << " passed, " << db.records.size() - passed
      << " failed\n";
  return out.str();
}

}  // namespace testit
