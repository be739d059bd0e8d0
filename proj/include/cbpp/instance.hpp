#pragma once

#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cbpp/errors.hpp"

namespace cbpp {

// One item type: positive length, number of copies demanded, and a color.
struct Item {
  int id = 0;  // 1-based, contiguous within the owning instance
  int length = 0;
  int demand = 0;
  int color = 0;  // in [1, num_colors]
};

// A colored bin packing instance. Items are kept in id order (ids 1..m).
struct Instance {
  int capacity = 0;
  int num_colors = 0;
  std::vector<Item> items;

  int num_items() const { return static_cast<int>(items.size()); }

  bool has_item(int id) const { return id >= 1 && id <= num_items(); }

  const Item& item(int id) const {
    if (!has_item(id))
      throw ValidationError("unknown item id " + std::to_string(id));
    return items[static_cast<std::size_t>(id) - 1];
  }

  long long total_copies() const {
    long long n = 0;
    for (const Item& it : items) n += it.demand;
    return n;
  }

  long long total_length() const {
    long long s = 0;
    for (const Item& it : items) s += static_cast<long long>(it.length) * it.demand;
    return s;
  }
};

// Checks every structural invariant; throws ValidationError on the first hit.
inline void validate_instance(const Instance& inst) {
  if (inst.capacity < 1)
    throw ValidationError("capacity must be >= 1");
  if (inst.num_colors < 2)
    throw ValidationError("need at least two colors");
  std::set<std::pair<int, int>> seen;  // (length, color)
  for (int i = 0; i < inst.num_items(); ++i) {
    const Item& it = inst.items[static_cast<std::size_t>(i)];
    if (it.id != i + 1)
      throw ValidationError("item ids must be 1..m without gaps, got " +
                            std::to_string(it.id) + " at position " + std::to_string(i + 1));
    if (it.length < 1)
      throw ValidationError("item " + std::to_string(it.id) + ": length must be >= 1");
    if (it.length > inst.capacity)
      throw ValidationError("item " + std::to_string(it.id) + ": length exceeds capacity");
    if (it.demand < 1)
      throw ValidationError("item " + std::to_string(it.id) + ": demand must be >= 1");
    if (it.color < 1 || it.color > inst.num_colors)
      throw ValidationError("item " + std::to_string(it.id) + ": color out of range");
    if (!seen.insert({it.length, it.color}).second)
      throw ValidationError("duplicate (length,color) pair (" + std::to_string(it.length) +
                            "," + std::to_string(it.color) + ")");
  }
}

struct ParsedInstance {
  Instance instance;
  std::string class_label;  // from a leading "# class <label>" comment, if any
};

namespace detail {

inline std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

inline bool blank_line(const std::string& s) {
  for (char c : s)
    if (c != ' ' && c != '\t') return false;
  return true;
}

}  // namespace detail

// Instance text: optional '#' comment lines, a "m L Q" header, then one
// "length demand color" line per item. A leading "# class <label>" comment
// carries the benchmark class.
inline ParsedInstance parse_instance(std::istream& in) {
  ParsedInstance out;
  std::string line;
  int line_no = 0;
  int need = -1;  // items still expected; -1 until the header is read
  auto fail = [&](const std::string& msg) -> void {
    throw IoError("instance line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (detail::blank_line(line)) continue;
    if (line[line.find_first_not_of(" \t")] == '#') {
      std::istringstream cs(line);
      std::string hash, key;
      cs >> hash >> key;
      if (out.class_label.empty() && key == "class") {
        std::string rest;
        std::getline(cs, rest);
        std::size_t b = rest.find_first_not_of(" \t");
        if (b != std::string::npos) out.class_label = rest.substr(b);
      }
      continue;
    }
    std::istringstream ls(line);
    if (need < 0) {
      int m = 0;
      if (!(ls >> m >> out.instance.capacity >> out.instance.num_colors))
        fail("expected header 'm L Q'");
      std::string junk;
      if (ls >> junk) fail("trailing tokens after header");
      if (m < 0) fail("negative item count");
      need = m;
      out.instance.items.reserve(static_cast<std::size_t>(m));
    } else if (need > 0) {
      Item it;
      if (!(ls >> it.length >> it.demand >> it.color))
        fail("expected 'length demand color'");
      std::string junk;
      if (ls >> junk) fail("trailing tokens after item");
      it.id = static_cast<int>(out.instance.items.size()) + 1;
      out.instance.items.push_back(it);
      --need;
    } else {
      fail("unexpected extra line");
    }
  }
  if (need != 0)
    throw IoError(need < 0 ? "instance file has no header line"
                           : "instance file truncated: " + std::to_string(need) +
                                 " item line(s) missing");
  validate_instance(out.instance);
  return out;
}

inline ParsedInstance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline ParsedInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path);
  try {
    return parse_instance(in);
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

// Byte-exact writer: single spaces, '\n' endings, trailing newline.
inline std::string format_instance(const Instance& inst, const std::string& class_label = "") {
  std::ostringstream out;
  if (!class_label.empty()) out << "# class " << class_label << "\n";
  out << inst.num_items() << " " << inst.capacity << " " << inst.num_colors << "\n";
  for (const Item& it : inst.items)
    out << it.length << " " << it.demand << " " << it.color << "\n";
  return out.str();
}

inline void write_instance_file(const std::string& path, const Instance& inst,
                                const std::string& class_label = "") {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write instance file: " + path);
  out << format_instance(inst, class_label);
  if (!out) throw IoError("short write: " + path);
}

}  // namespace cbpp
