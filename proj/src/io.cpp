#include "ssrent/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ssrent {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::parse_error, "field '" + field + "': " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

LocalLabel label(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [particles, index]");
  LocalLabel l{integer(j[0], path + "[0]"), integer(j[1], path + "[1]")};
  if (l.particles < 0 || l.index < 0) fail(path, "negative label");
  return l;
}

std::optional<LocalSpace> degeneracy(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (!it->is_array()) fail(key, "expected an array of integers");
  std::vector<int> d;
  for (std::size_t i = 0; i < it->size(); ++i) {
    int v = integer((*it)[i], std::string(key) + "[" + std::to_string(i) + "]");
    if (v < 0) fail(key, "negative degeneracy");
    d.push_back(v);
  }
  try {
    return LocalSpace(d);
  } catch (const Error& e) {
    fail(key, e.what());
  }
}

json label_json(const LocalLabel& l) { return json::array({l.particles, l.index}); }

json degeneracy_json(const LocalSpace& s) { return json(s.degeneracies()); }

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed JSON: ") + e.what());
  }
}

SectoredPureState pure_from_json(const json& j, const std::string& path) {
  const json& amps = need(j, "amplitudes", path);
  std::string ap = path.empty() ? "amplitudes" : path + ".amplitudes";
  if (!amps.is_array()) fail(ap, "expected an array");
  std::vector<Amplitude> list;
  for (std::size_t k = 0; k < amps.size(); ++k) {
    std::string p = ap + "[" + std::to_string(k) + "]";
    const json& a = amps[k];
    list.push_back({label(need(a, "a", p), p + ".a"), label(need(a, "b", p), p + ".b"),
                    cplx(number(need(a, "re", p), p + ".re"), a.contains("im") ? number(a["im"], p + ".im") : 0.0)});
  }
  if (j.contains("total_particles")) {
    int total = integer(j["total_particles"], path.empty() ? "total_particles" : path + ".total_particles");
    for (std::size_t k = 0; k < list.size(); ++k)
      if (list[k].alice.particles + list[k].bob.particles != total)
        fail(ap + "[" + std::to_string(k) + "]", "labels do not add up to total_particles");
  }
  try {
    return SectoredPureState::from_amplitudes(list, degeneracy(j, "alice_degeneracy"), degeneracy(j, "bob_degeneracy"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    fail(ap, e.what());
  }
}

BlockDensityMatrix density_from_json(const json& j) {
  const json& blocks = need(j, "blocks", "");
  if (!blocks.is_array() || blocks.empty()) fail("blocks", "expected a non-empty array");
  struct Raw {
    int total;
    std::vector<std::pair<LocalLabel, LocalLabel>> basis;
    CMatrix m;
  };
  std::vector<Raw> raw;
  std::vector<int> da, db;
  auto grow = [](std::vector<int>& d, const LocalLabel& l) {
    if (static_cast<int>(d.size()) <= l.particles) d.resize(l.particles + 1, 0);
    d[l.particles] = std::max(d[l.particles], l.index + 1);
  };
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    std::string p = "blocks[" + std::to_string(k) + "]";
    const json& b = blocks[k];
    Raw r;
    r.total = integer(need(b, "total_particles", p), p + ".total_particles");
    const json& basis = need(b, "basis", p);
    if (!basis.is_array()) fail(p + ".basis", "expected an array");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::string q = p + ".basis[" + std::to_string(i) + "]";
      if (!basis[i].is_array() || basis[i].size() != 2) fail(q, "expected [[n, i], [m, j]]");
      LocalLabel la = label(basis[i][0], q + "[0]"), lb = label(basis[i][1], q + "[1]");
      if (la.particles + lb.particles != r.total) fail(q, "labels do not add up to total_particles");
      grow(da, la);
      grow(db, lb);
      r.basis.emplace_back(la, lb);
    }
    int d = static_cast<int>(r.basis.size());
    r.m = CMatrix::Zero(d, d);
    for (const char* part : {"re", "im"}) {
      if (std::string(part) == "im" && !b.contains("im")) continue;
      const json& rows = need(b, part, p);
      std::string q = p + "." + part;
      if (!rows.is_array() || static_cast<int>(rows.size()) != d) fail(q, "expected a square matrix matching the basis");
      for (int x = 0; x < d; ++x) {
        if (!rows[x].is_array() || static_cast<int>(rows[x].size()) != d) fail(q, "expected a square matrix matching the basis");
        for (int y = 0; y < d; ++y) {
          double v = number(rows[x][y], q + "[" + std::to_string(x) + "][" + std::to_string(y) + "]");
          if (std::string(part) == "re") r.m(x, y) += v;
          else r.m(x, y) += cplx(0.0, v);
        }
      }
    }
    raw.push_back(std::move(r));
  }
  std::optional<LocalSpace> sa = degeneracy(j, "alice_degeneracy"), sb = degeneracy(j, "bob_degeneracy");
  LocalSpace alice = sa ? *sa : LocalSpace(da), bob = sb ? *sb : LocalSpace(db);
  std::map<int, CMatrix> out;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    std::string p = "blocks[" + std::to_string(k) + "]";
    BlockBasis basis(alice, bob, raw[k].total);
    if (out.count(raw[k].total)) fail(p, "duplicate total_particles");
    if (basis.size() != static_cast<int>(raw[k].basis.size())) fail(p + ".basis", "does not list the full block basis");
    std::vector<int> pos;
    for (const auto& [la, lb] : raw[k].basis) {
      int q = basis.position(la, lb);
      if (q < 0 || std::find(pos.begin(), pos.end(), q) != pos.end()) fail(p + ".basis", "unknown or repeated label");
      pos.push_back(q);
    }
    CMatrix m(basis.size(), basis.size());
    for (int x = 0; x < basis.size(); ++x)
      for (int y = 0; y < basis.size(); ++y) m(pos[x], pos[y]) = raw[k].m(x, y);
    out.emplace(raw[k].total, std::move(m));
  }
  try {
    return BlockDensityMatrix(alice, bob, std::move(out));
  } catch (const Error& e) {
    fail("blocks", e.what());
  }
}

}  // namespace

std::string to_json(const SectoredPureState& state) {
  json j;
  j["total_particles"] = state.total_particles();
  j["alice_degeneracy"] = degeneracy_json(state.alice_space());
  j["bob_degeneracy"] = degeneracy_json(state.bob_space());
  json amps = json::array();
  // every stored sector entry, zeros included, so the sector map survives a round trip
  for (const auto& [n, m] : state.sectors())
    for (int i = 0; i < m.rows(); ++i)
      for (int k = 0; k < m.cols(); ++k)
        amps.push_back({{"a", label_json({n, i})},
                        {"b", label_json({state.total_particles() - n, k})},
                        {"re", m(i, k).real()},
                        {"im", m(i, k).imag()}});
  j["amplitudes"] = std::move(amps);
  return j.dump(2);
}

std::string to_json(const BlockDensityMatrix& rho) {
  json j;
  j["alice_degeneracy"] = degeneracy_json(rho.alice_space());
  j["bob_degeneracy"] = degeneracy_json(rho.bob_space());
  json blocks = json::array();
  for (const auto& [n, m] : rho.blocks()) {
    json basis = json::array(), re = json::array(), im = json::array();
    BlockBasis bb = rho.basis(n);
    for (const auto& [la, lb] : bb.labels()) basis.push_back({label_json(la), label_json(lb)});
    for (int x = 0; x < m.rows(); ++x) {
      json r = json::array(), i = json::array();
      for (int y = 0; y < m.cols(); ++y) {
        r.push_back(m(x, y).real());
        i.push_back(m(x, y).imag());
      }
      re.push_back(std::move(r));
      im.push_back(std::move(i));
    }
    blocks.push_back({{"total_particles", n}, {"basis", basis}, {"re", re}, {"im", im}});
  }
  j["blocks"] = std::move(blocks);
  return j.dump(2);
}

ParsedState parse_state(const std::string& text) {
  json j = parse_text(text);
  if (!j.is_object()) fail("<root>", "expected an object");
  if (j.contains("amplitudes")) return pure_from_json(j, "");
  if (j.contains("blocks")) return density_from_json(j);
  fail("<root>", "needs 'amplitudes' (pure state) or 'blocks' (density matrix)");
}

SectoredPureState parse_pure_state(const std::string& text) {
  json j = parse_text(text);
  return pure_from_json(j, "");
}

BlockDensityMatrix parse_density(const std::string& text) {
  ParsedState s = parse_state(text);
  if (auto* p = std::get_if<SectoredPureState>(&s)) return p->density();
  return std::get<BlockDensityMatrix>(s);
}

ConversionTask parse_task(const std::string& source_text, const std::string& targets_text) {
  SectoredPureState source = parse_pure_state(source_text);
  json t = parse_text(targets_text);
  if (t.is_object() && t.contains("targets")) {
    const json& list = t["targets"];
    if (!list.is_array() || list.empty()) fail("targets", "expected a non-empty array");
    std::vector<ConversionTarget> targets;
    for (std::size_t k = 0; k < list.size(); ++k) {
      std::string p = "targets[" + std::to_string(k) + "]";
      double prob = number(need(list[k], "probability", p), p + ".probability");
      targets.push_back({prob, pure_from_json(need(list[k], "state", p), p + ".state")});
    }
    try {
      return ConversionTask(source, std::move(targets));
    } catch (const Error& e) {
      fail("targets", e.what());
    }
  }
  return ConversionTask::deterministic(source, pure_from_json(t, ""));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

}  // namespace ssrent
