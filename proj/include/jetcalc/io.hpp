#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "jetcalc/group.hpp"
#include "jetcalc/reduction.hpp"

namespace jetcalc {
namespace io {

inline constexpr const char* kFileHeader = "jetcalc-file v1";

/// Parse failure with a path-precise message (line numbers are tracked by
/// the reader).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  /// Next non-empty, non-comment line; empty string at EOF.
  std::string next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineNo_;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      if (line.empty() || line[0] == '#') continue;
      return line;
    }
    return "";
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(lineNo_) + ": " + msg);
  }
  int lineNo() const { return lineNo_; }

 private:
  std::istream& in_;
  int lineNo_ = 0;
};

inline std::vector<int> parseIntList(const std::string& s, LineReader& r) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) r.fail("empty index in list '" + s + "'");
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      r.fail("bad integer '" + tok + "'");
    }
  }
  return out;
}

inline const char* slotToken(SlotKind k) {
  switch (k) {
    case SlotKind::FiberUp: return "FU";
    case SlotKind::FiberDown: return "FD";
    case SlotKind::BaseUp: return "BU";
    case SlotKind::BaseDown: return "BD";
  }
  return "?";
}

inline SlotKind slotFromToken(const std::string& t, LineReader& r) {
  if (t == "FU") return SlotKind::FiberUp;
  if (t == "FD") return SlotKind::FiberDown;
  if (t == "BU") return SlotKind::BaseUp;
  if (t == "BD") return SlotKind::BaseDown;
  r.fail("unknown slot kind '" + t + "'");
}

}  // namespace detail

/// Tensor block: header, then one line per nonzero jet coordinate as
/// name[comp indices|derivative labels] = num/den (all indices 1-based),
/// closed by 'end'.
inline void writeTensorBlock(std::ostream& out, const RTensor& t, const std::string& name) {
  out << "tensor " << name << "\n";
  out << "m " << t.dim() << "\n";
  out << "n " << t.fiberDim() << "\n";
  out << "order " << t.order() << "\n";
  out << "slots";
  for (SlotKind k : t.slots()) out << " " << detail::slotToken(k);
  out << "\n";
  for (const auto& g : t.symmetries()) {
    out << (g.anti ? "antisym" : "sym");
    for (std::size_t i = 0; i < g.slots.size(); ++i)
      out << (i ? "," : " ") << g.slots[i] + 1;
    out << "\n";
  }
  forEachIndex(t.ranges(), [&](const std::vector<int>& idx) {
    for (int d = 0; d <= t.order(); ++d) {
      for (const auto& v : allMultisets(t.dim(), d)) {
        MultiIndex mi(v);
        Rational c = t.jetCoordinate(idx, mi);
        if (c == 0) continue;
        out << name << "[";
        for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << idx[i] + 1;
        out << "|";
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i] + 1;
        out << "] = " << rationalToString(c) << "\n";
      }
    }
  });
  out << "end\n";
}

/// Reads a tensor block; the leading 'tensor <name>' line must already be
/// consumed and its name passed in.
inline RTensor readTensorBlock(detail::LineReader& r, const std::string& name) {
  int m = -1, n = -1, order = -1;
  std::vector<SlotKind> slots;
  std::vector<SlotSym> syms;
  bool haveSlots = false;
  std::string line;
  // Header lines until the first coordinate or 'end'.
  std::vector<std::string> pending;
  while (true) {
    line = r.next();
    if (line.empty()) r.fail("unexpected end of file in tensor block");
    std::stringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "m") {
      ss >> m;
    } else if (kw == "n") {
      ss >> n;
    } else if (kw == "order") {
      ss >> order;
    } else if (kw == "slots") {
      std::string tok;
      while (ss >> tok) slots.push_back(detail::slotFromToken(tok, r));
      haveSlots = true;
    } else if (kw == "sym" || kw == "antisym") {
      std::string list;
      ss >> list;
      SlotSym g;
      g.anti = (kw == "antisym");
      for (int s1 : detail::parseIntList(list, r)) g.slots.push_back(s1 - 1);
      syms.push_back(g);
    } else {
      pending.push_back(line);
      break;
    }
  }
  if (m < 1 || n < 1 || order < 0 || !haveSlots)
    r.fail("incomplete tensor header (need m, n, order, slots)");
  RTensor t(m, n, slots, order, syms);
  auto handleCoord = [&](const std::string& c) {
    if (c == "end") return false;
    auto open = c.find('[');
    auto bar = c.find('|');
    auto close = c.find(']');
    auto eq = c.find('=');
    if (open == std::string::npos || bar == std::string::npos ||
        close == std::string::npos || eq == std::string::npos)
      r.fail("malformed coordinate line '" + c + "'");
    std::string cname = c.substr(0, open);
    while (!cname.empty() && cname.back() == ' ') cname.pop_back();
    if (cname != name) r.fail("coordinate name '" + cname + "' does not match block '" + name + "'");
    std::vector<int> idx, der;
    std::string compStr = c.substr(open + 1, bar - open - 1);
    std::string derStr = c.substr(bar + 1, close - bar - 1);
    if (!compStr.empty())
      for (int v : detail::parseIntList(compStr, r)) idx.push_back(v - 1);
    if (!derStr.empty())
      for (int v : detail::parseIntList(derStr, r)) der.push_back(v - 1);
    std::string val = c.substr(eq + 1);
    auto f = val.find_first_not_of(" \t");
    if (f == std::string::npos) r.fail("missing value in '" + c + "'");
    val = val.substr(f);
    MultiIndex mi(der);
    if (mi.order() > order) r.fail("derivative order beyond trust order in '" + c + "'");
    try {
      t.setJetCoordinate(idx, mi, rationalFromString(val));
    } catch (const std::exception& e) {
      r.fail(std::string(e.what()) + " in '" + c + "'");
    }
    return true;
  };
  for (const auto& c : pending)
    if (!handleCoord(c)) {
      if (!t.auditSymmetries()) r.fail("tensor block '" + name + "' violates declared symmetry");
      return t;
    }
  while (true) {
    line = r.next();
    if (line.empty()) r.fail("unexpected end of file in tensor block");
    if (!handleCoord(line)) break;
  }
  if (!t.auditSymmetries()) r.fail("tensor block '" + name + "' violates declared symmetry");
  return t;
}

inline void writeHeader(std::ostream& out, const std::string& type) {
  out << kFileHeader << "\n";
  out << "type " << type << "\n";
}

inline std::string readHeader(detail::LineReader& r) {
  std::string line = r.next();
  if (line != kFileHeader) r.fail("unknown schema version (expected '" + std::string(kFileHeader) + "')");
  line = r.next();
  std::stringstream ss(line);
  std::string kw, type;
  ss >> kw >> type;
  if (kw != "type") r.fail("missing 'type' line");
  return type;
}

inline void writeTensorFile(std::ostream& out, const RTensor& t,
                            const std::string& name = "t") {
  writeHeader(out, "tensor");
  writeTensorBlock(out, t, name);
}

inline RTensor readTensorFile(std::istream& in) {
  detail::LineReader r(in);
  if (readHeader(r) != "tensor") r.fail("expected a tensor file");
  std::string line = r.next();
  std::stringstream ss(line);
  std::string kw, name;
  ss >> kw >> name;
  if (kw != "tensor") r.fail("expected 'tensor <name>'");
  return readTensorBlock(r, name);
}

/// Group element file: orders plus nonzero jet coordinates of the base map
/// (a[lambda|mu,...]) and the gauge matrix (g[i,j|mu,...]).
inline void writeGroupFile(std::ostream& out, const WGroupElement& e) {
  writeHeader(out, "group-element");
  int m = e.base.m, n = e.gauge.n;
  out << "m " << m << "\nn " << n << "\nt1 " << e.base.order << "\nt2 " << e.gauge.order
      << "\n";
  for (int l = 0; l < m; ++l)
    for (int d = 1; d <= e.base.order; ++d)
      for (const auto& v : allMultisets(m, d)) {
        MultiIndex mi(v);
        Rational c = e.base.jetCoordinate(l, mi);
        if (c == 0) continue;
        out << "a[" << l + 1 << "|";
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i] + 1;
        out << "] = " << rationalToString(c) << "\n";
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int d = 0; d <= e.gauge.order; ++d)
        for (const auto& v : allMultisets(m, d)) {
          MultiIndex mi(v);
          Rational c = e.gauge.jetCoordinate(i, j, mi);
          if (c == 0) continue;
          out << "g[" << i + 1 << "," << j + 1 << "|";
          for (std::size_t t = 0; t < v.size(); ++t) out << (t ? "," : "") << v[t] + 1;
          out << "] = " << rationalToString(c) << "\n";
        }
  out << "end\n";
}

inline WGroupElement readGroupFile(std::istream& in) {
  detail::LineReader r(in);
  if (readHeader(r) != "group-element") r.fail("expected a group-element file");
  int m = -1, n = -1, t1 = -1, t2 = -1;
  std::string line;
  while (true) {
    line = r.next();
    if (line.empty()) r.fail("unexpected end of file");
    std::stringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "m") ss >> m;
    else if (kw == "n") ss >> n;
    else if (kw == "t1") ss >> t1;
    else if (kw == "t2") ss >> t2;
    else break;
  }
  if (m < 1 || n < 1 || t1 < 0 || t2 < 0) r.fail("incomplete group-element header");
  // Start from zero maps; linear/constant identity parts must be stored in
  // the file itself (they are written as nonzero coordinates).
  WGroupElement e = WGroupElement::identity(m, n, t1, t2);
  for (int l = 0; l < m; ++l) e.base.comp[l] = RSeries(m, t1);
  for (int i = 0; i < n * n; ++i) e.gauge.a[i] = RSeries(m, t2);
  auto handle = [&](const std::string& c) {
    if (c == "end") return false;
    auto open = c.find('[');
    auto bar = c.find('|');
    auto close = c.find(']');
    auto eq = c.find('=');
    if (open == std::string::npos || bar == std::string::npos ||
        close == std::string::npos || eq == std::string::npos)
      r.fail("malformed coordinate line '" + c + "'");
    std::string cname = c.substr(0, open);
    std::vector<int> comp = detail::parseIntList(c.substr(open + 1, bar - open - 1), r);
    std::vector<int> der;
    std::string derStr = c.substr(bar + 1, close - bar - 1);
    if (!derStr.empty())
      for (int v : detail::parseIntList(derStr, r)) der.push_back(v - 1);
    Rational val = rationalFromString(c.substr(eq + 1));
    MultiIndex mi(der);
    if (cname == "a") {
      if (comp.size() != 1) r.fail("base coordinate needs one component index");
      e.base.comp[comp[0] - 1].setJetCoordinate(mi, val);
    } else if (cname == "g") {
      if (comp.size() != 2) r.fail("gauge coordinate needs two component indices");
      e.gauge.a[(comp[0] - 1) * n + (comp[1] - 1)].setJetCoordinate(mi, val);
    } else {
      r.fail("unknown coordinate family '" + cname + "'");
    }
    return true;
  };
  if (!handle(line)) return e;
  while (true) {
    line = r.next();
    if (line.empty()) r.fail("unexpected end of file");
    if (!handle(line)) break;
  }
  return e;
}

inline void writeReducedFirstFile(std::ostream& out, const ReducedFirst& d) {
  writeHeader(out, "reduced-first");
  out << "m " << d.m << "\nn " << d.n << "\nk " << d.k << "\ns " << d.s << "\nr " << d.r
      << "\n";
  out << "lamlow " << (d.lamLow ? "present" : "absent") << "\n";
  if (d.lamLow) writeTensorBlock(out, *d.lamLow, "lam");
  writeTensorBlock(out, *d.kLow, "K");
  for (std::size_t i = 0; i < d.wList.size(); ++i)
    writeTensorBlock(out, d.wList[i], "w" + std::to_string(i));
  for (std::size_t i = 0; i < d.uList.size(); ++i)
    writeTensorBlock(out, d.uList[i], "u" + std::to_string(i));
}

inline ReducedFirst readReducedFirstFile(std::istream& in) {
  detail::LineReader r(in);
  if (readHeader(r) != "reduced-first") r.fail("expected a reduced-first file");
  ReducedFirst d;
  bool lamPresent = false;
  std::string line;
  while (true) {
    line = r.next();
    if (line.empty()) r.fail("unexpected end of file");
    std::stringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "m") ss >> d.m;
    else if (kw == "n") ss >> d.n;
    else if (kw == "k") ss >> d.k;
    else if (kw == "s") ss >> d.s;
    else if (kw == "r") ss >> d.r;
    else if (kw == "lamlow") {
      std::string flag;
      ss >> flag;
      lamPresent = (flag == "present");
      break;
    } else {
      r.fail("unexpected line '" + line + "' in reduced-first header");
    }
  }
  auto nextBlock = [&]() {
    std::string l2 = r.next();
    if (l2.empty()) r.fail("unexpected end of file (expected tensor block)");
    std::stringstream ss(l2);
    std::string kw, name;
    ss >> kw >> name;
    if (kw != "tensor") r.fail("expected 'tensor <name>', got '" + l2 + "'");
    return readTensorBlock(r, name);
  };
  if (lamPresent) d.lamLow = nextBlock();
  d.kLow = nextBlock();
  int wCount = d.s - std::max(d.k - 2, 0);
  int uCount = d.r - (d.k - 1);
  for (int i = 0; i < wCount; ++i) d.wList.push_back(nextBlock());
  for (int i = 0; i < uCount; ++i) d.uList.push_back(nextBlock());
  return d;
}

inline void writeReducedSecondFile(std::ostream& out, const ReducedSecond& d) {
  writeHeader(out, "reduced-second");
  out << "m " << d.m << "\nn " << d.n << "\nk " << d.k << "\ns1 " << d.s1 << "\ns2 "
      << d.s2 << "\nr " << d.r << "\n";
  out << "phislots";
  for (SlotKind s : d.phiSlots) out << " " << detail::slotToken(s);
  out << "\n";
  out << "lowjets " << (d.lamLow ? "present" : "absent") << "\n";
  if (d.lamLow) {
    writeTensorBlock(out, *d.lamLow, "lam");
    writeTensorBlock(out, *d.kLow, "K");
  }
  writeTensorBlock(out, *d.phiLow, "phi");
  for (std::size_t i = 0; i < d.wList.size(); ++i)
    writeTensorBlock(out, d.wList[i], "w" + std::to_string(i));
  for (std::size_t i = 0; i < d.uList.size(); ++i)
    writeTensorBlock(out, d.uList[i], "u" + std::to_string(i));
  for (std::size_t i = 0; i < d.vList.size(); ++i)
    writeTensorBlock(out, d.vList[i], "v" + std::to_string(i));
}

inline ReducedSecond readReducedSecondFile(std::istream& in) {
  detail::LineReader r(in);
  if (readHeader(r) != "reduced-second") r.fail("expected a reduced-second file");
  ReducedSecond d;
  bool lowPresent = false;
  std::string line;
  while (true) {
    line = r.next();
    if (line.empty()) r.fail("unexpected end of file");
    std::stringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "m") ss >> d.m;
    else if (kw == "n") ss >> d.n;
    else if (kw == "k") ss >> d.k;
    else if (kw == "s1") ss >> d.s1;
    else if (kw == "s2") ss >> d.s2;
    else if (kw == "r") ss >> d.r;
    else if (kw == "phislots") {
      std::string tok;
      while (ss >> tok) d.phiSlots.push_back(detail::slotFromToken(tok, r));
    } else if (kw == "lowjets") {
      std::string flag;
      ss >> flag;
      lowPresent = (flag == "present");
      break;
    } else {
      r.fail("unexpected line '" + line + "' in reduced-second header");
    }
  }
  auto nextBlock = [&]() {
    std::string l2 = r.next();
    if (l2.empty()) r.fail("unexpected end of file (expected tensor block)");
    std::stringstream ss(l2);
    std::string kw, name;
    ss >> kw >> name;
    if (kw != "tensor") r.fail("expected 'tensor <name>', got '" + l2 + "'");
    return readTensorBlock(r, name);
  };
  if (lowPresent) {
    d.lamLow = nextBlock();
    d.kLow = nextBlock();
  }
  d.phiLow = nextBlock();
  int wCount = d.s1 - std::max(d.k - 2, 0);
  int uCount = d.s2 - std::max(d.k - 2, 0);
  int vCount = d.r - d.k + 1;
  for (int i = 0; i < wCount; ++i) d.wList.push_back(nextBlock());
  for (int i = 0; i < uCount; ++i) d.uList.push_back(nextBlock());
  for (int i = 0; i < vCount; ++i) d.vList.push_back(nextBlock());
  return d;
}

}  // namespace io
}  // namespace jetcalc
