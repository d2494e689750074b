#include "qreshape/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qreshape {

namespace {

const std::map<std::string, GateKind>& name_table() {
  static const std::map<std::string, GateKind> t = {
      {"i", GateKind::I},       {"x", GateKind::X},   {"y", GateKind::Y},
      {"z", GateKind::Z},       {"h", GateKind::H},   {"s", GateKind::S},
      {"rx", GateKind::RX},     {"ry", GateKind::RY}, {"rz", GateKind::RZ},
      {"prx", GateKind::PRX},   {"cnot", GateKind::CNOT},
      {"cz", GateKind::CZ},     {"xx", GateKind::XX}, {"ms", GateKind::MS}};
  return t;
}

Gate make1(GateKind k, int q, std::vector<double> params = {}) {
  Gate g;
  g.kind = k;
  g.qubits = {q};
  g.params = std::move(params);
  return g;
}

Gate make2(GateKind k, int q0, int q1, std::vector<double> params = {}) {
  Gate g;
  g.kind = k;
  g.qubits = {q0, q1};
  g.params = std::move(params);
  return g;
}

bool is_entangler(GateKind k) {
  return k == GateKind::CNOT || k == GateKind::CZ || k == GateKind::XX ||
         k == GateKind::MS;
}

CMat rx_m(double t) {
  CMat m(2, 2);
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  m << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
  return m;
}

CMat ry_m(double t) {
  CMat m(2, 2);
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  m << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
  return m;
}

CMat rz_m(double t) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -t / 2);
  m(1, 1) = std::polar(1.0, t / 2);
  return m;
}

std::string fmt_double(double v) {
  if (v == 0.0) v = 0.0;  // print negative zero as 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int gate_arity(GateKind k) { return is_entangler(k) ? 2 : 1; }

int gate_param_count(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    case GateKind::PRX:
    case GateKind::MS:
      return 2;
    default:
      return 0;
  }
}

std::string gate_name(GateKind k) {
  for (const auto& [name, kind] : name_table())
    if (kind == k) return name;
  throw std::logic_error("gate_name: unknown kind");
}

CMat gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::I:
      return identity(2);
    case GateKind::X:
      return pauli_x();
    case GateKind::Y:
      return pauli_y();
    case GateKind::Z:
      return pauli_z();
    case GateKind::H: {
      CMat m(2, 2);
      const double c = 1.0 / std::sqrt(2.0);
      m << Complex(c, 0), Complex(c, 0), Complex(c, 0), Complex(-c, 0);
      return m;
    }
    case GateKind::S: {
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = Complex(0, 1);
      return m;
    }
    case GateKind::RX:
      return rx_m(g.params.at(0));
    case GateKind::RY:
      return ry_m(g.params.at(0));
    case GateKind::RZ:
      return rz_m(g.params.at(0));
    case GateKind::PRX:
      return rz_m(g.params.at(1)) * rx_m(g.params.at(0)) * rz_m(-g.params.at(1));
    case GateKind::CNOT: {
      CMat m = CMat::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::CZ: {
      CMat m = identity(4);
      m(3, 3) = -1.0;
      return m;
    }
    case GateKind::XX: {
      const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
      CMat m = c * identity(4);
      const Complex ms(0, -s);
      m(0, 3) = ms;
      m(1, 2) = ms;
      m(2, 1) = ms;
      m(3, 0) = ms;
      return m;
    }
    case GateKind::MS: {
      const double p1 = g.params.at(0), p2 = g.params.at(1);
      const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
      CMat m = c * identity(4);
      const Complex mi(0, -1);
      m(0, 3) = mi * std::polar(s, -(p1 + p2));
      m(1, 2) = mi * std::polar(s, -(p1 - p2));
      m(2, 1) = mi * std::polar(s, (p1 - p2));
      m(3, 0) = mi * std::polar(s, (p1 + p2));
      return m;
    }
  }
  throw std::logic_error("gate_matrix: unknown kind");
}

CMat circuit_unitary(const Circuit& c) {
  const int dim = 1 << c.n_qubits;
  CMat u = identity(dim);
  for (const auto& g : c.gates) {
    const CMat m = gate_matrix(g);
    const CMat lifted = gate_arity(g.kind) == 1
                            ? lift1(m, g.qubits.at(0), c.n_qubits)
                            : lift2(m, g.qubits.at(0), g.qubits.at(1), c.n_qubits);
    u = lifted * u;
  }
  return u;
}

Circuit parse_circuit(std::istream& in) {
  Circuit c;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (!header_seen) {
      if (word != "qubits")
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": expected 'qubits N' header");
      if (!(ls >> c.n_qubits) || c.n_qubits < 1 || c.n_qubits > 20)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": invalid qubit count");
      header_seen = true;
      continue;
    }
    const auto it = name_table().find(word);
    if (it == name_table().end())
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": unknown gate '" + word + "'");
    Gate g;
    g.kind = it->second;
    for (int a = 0; a < gate_arity(g.kind); ++a) {
      int q;
      if (!(ls >> q) || q < 0 || q >= c.n_qubits)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": bad qubit index");
      g.qubits.push_back(q);
    }
    if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1])
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": repeated qubit in two-qubit gate");
    for (int a = 0; a < gate_param_count(g.kind); ++a) {
      double p;
      if (!(ls >> p))
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": missing parameter");
      g.params.push_back(p);
    }
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": trailing token '" + extra + "'");
    c.gates.push_back(std::move(g));
  }
  if (!header_seen) throw std::runtime_error("empty circuit: missing 'qubits N'");
  return c;
}

Circuit parse_circuit_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open circuit file: " + path);
  return parse_circuit(f);
}

std::string format_circuit(const Circuit& c) {
  std::string out = "qubits " + std::to_string(c.n_qubits) + "\n";
  for (const auto& g : c.gates) {
    out += gate_name(g.kind);
    for (int q : g.qubits) out += " " + std::to_string(q);
    for (double p : g.params) out += " " + fmt_double(p);
    out += "\n";
  }
  return out;
}

std::vector<Gate> decompose_cnot_xx(int control, int target) {
  return {make1(GateKind::RY, control, {kPi / 2}),
          make2(GateKind::XX, control, target),
          make1(GateKind::RX, control, {-kPi / 2}),
          make1(GateKind::RX, target, {-kPi / 2}),
          make1(GateKind::RY, control, {-kPi / 2})};
}

std::vector<Gate> decompose_cnot_cz(int control, int target) {
  return {make1(GateKind::H, target), make2(GateKind::CZ, control, target),
          make1(GateKind::H, target)};
}

namespace {

// Pass 1: lower to {RX, RY, RZ} plus the backend entangler (ion: XX/MS,
// cz: CZ).
void lower_gate(const Gate& g, Backend backend, std::vector<Gate>& out) {
  auto emit = [&out](Gate gg) { out.push_back(std::move(gg)); };
  auto emit_all = [&](const std::vector<Gate>& gs) {
    for (const auto& gg : gs) lower_gate(gg, backend, out);
  };
  switch (g.kind) {
    case GateKind::I:
      return;
    case GateKind::X:
      emit(make1(GateKind::RX, g.qubits[0], {kPi}));
      return;
    case GateKind::Y:
      emit(make1(GateKind::RY, g.qubits[0], {kPi}));
      return;
    case GateKind::Z:
      emit(make1(GateKind::RZ, g.qubits[0], {kPi}));
      return;
    case GateKind::S:
      emit(make1(GateKind::RZ, g.qubits[0], {kPi / 2}));
      return;
    case GateKind::H:
      emit(make1(GateKind::RZ, g.qubits[0], {kPi}));
      emit(make1(GateKind::RY, g.qubits[0], {kPi / 2}));
      return;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      emit(g);
      return;
    case GateKind::PRX:
      emit(make1(GateKind::RZ, g.qubits[0], {-g.params[1]}));
      emit(make1(GateKind::RX, g.qubits[0], {g.params[0]}));
      emit(make1(GateKind::RZ, g.qubits[0], {g.params[1]}));
      return;
    case GateKind::CNOT:
      if (backend == Backend::Ion)
        emit_all(decompose_cnot_xx(g.qubits[0], g.qubits[1]));
      else
        emit_all(decompose_cnot_cz(g.qubits[0], g.qubits[1]));
      return;
    case GateKind::CZ:
      if (backend == Backend::CZB) {
        emit(g);
      } else {
        // CZ = H_t CNOT H_t.
        emit_all({make1(GateKind::H, g.qubits[1]),
                  make2(GateKind::CNOT, g.qubits[0], g.qubits[1]),
                  make1(GateKind::H, g.qubits[1])});
      }
      return;
    case GateKind::XX:
      if (backend == Backend::Ion) {
        emit(g);
      } else {
        // XX = (H(x)H)(S(x)S) CZ (H(x)H), rightmost first in time.
        emit_all({make1(GateKind::H, g.qubits[0]), make1(GateKind::H, g.qubits[1]),
                  make2(GateKind::CZ, g.qubits[0], g.qubits[1]),
                  make1(GateKind::S, g.qubits[0]), make1(GateKind::S, g.qubits[1]),
                  make1(GateKind::H, g.qubits[0]), make1(GateKind::H, g.qubits[1])});
      }
      return;
    case GateKind::MS:
      if (backend == Backend::Ion) {
        emit(g);
      } else {
        // MS(p1,p2) = (RZ(p1)(x)RZ(p2)) XX (RZ(-p1)(x)RZ(-p2)).
        emit(make1(GateKind::RZ, g.qubits[0], {-g.params[0]}));
        emit(make1(GateKind::RZ, g.qubits[1], {-g.params[1]}));
        lower_gate(make2(GateKind::XX, g.qubits[0], g.qubits[1]), backend, out);
        emit(make1(GateKind::RZ, g.qubits[0], {g.params[0]}));
        emit(make1(GateKind::RZ, g.qubits[1], {g.params[1]}));
      }
      return;
  }
  throw std::logic_error("lower_gate: unknown kind");
}

}  // namespace

CompileResult compile_circuit(const Circuit& in, Backend backend) {
  std::vector<Gate> lowered;
  for (const auto& g : in.gates) lower_gate(g, backend, lowered);

  CompileResult res;
  res.circuit.n_qubits = in.n_qubits;
  std::vector<double>& pending = res.pending_rz;
  pending.assign(in.n_qubits, 0.0);

  // Pass 2: fold RZ into the pending per-qubit frame.  Invariant:
  // U_in = D(pending) * U_emitted up to global phase at every step.
  for (const auto& g : lowered) {
    switch (g.kind) {
      case GateKind::RZ:
        pending[g.qubits[0]] += g.params[0];
        break;
      case GateKind::RX:
        res.circuit.gates.push_back(
            make1(GateKind::PRX, g.qubits[0], {g.params[0], -pending[g.qubits[0]]}));
        break;
      case GateKind::RY:
        res.circuit.gates.push_back(make1(
            GateKind::PRX, g.qubits[0], {g.params[0], kPi / 2 - pending[g.qubits[0]]}));
        break;
      case GateKind::PRX:
        res.circuit.gates.push_back(
            make1(GateKind::PRX, g.qubits[0],
                  {g.params[0], g.params[1] - pending[g.qubits[0]]}));
        break;
      case GateKind::XX:
        res.circuit.noise_sites.push_back(static_cast<int>(res.circuit.gates.size()));
        res.circuit.gates.push_back(
            make2(GateKind::MS, g.qubits[0], g.qubits[1],
                  {-pending[g.qubits[0]], -pending[g.qubits[1]]}));
        break;
      case GateKind::MS:
        res.circuit.noise_sites.push_back(static_cast<int>(res.circuit.gates.size()));
        res.circuit.gates.push_back(
            make2(GateKind::MS, g.qubits[0], g.qubits[1],
                  {g.params[0] - pending[g.qubits[0]],
                   g.params[1] - pending[g.qubits[1]]}));
        break;
      case GateKind::CZ:
        res.circuit.noise_sites.push_back(static_cast<int>(res.circuit.gates.size()));
        res.circuit.gates.push_back(g);
        break;
      default:
        throw std::logic_error("compile: unexpected gate after lowering");
    }
  }

  const VerifyReport rep = verify_compile(in, res);
  res.phase_distance = rep.distance;
  return res;
}

Circuit insert_redundant_pairs(const Circuit& c, int n_pairs) {
  if (n_pairs < 0) throw std::invalid_argument("insert_redundant_pairs: n < 0");
  Circuit out;
  out.n_qubits = c.n_qubits;
  std::vector<bool> eligible(c.gates.size(), false);
  for (int s : c.noise_sites) eligible.at(static_cast<std::size_t>(s)) = true;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const int new_idx = static_cast<int>(out.gates.size());
    out.gates.push_back(g);
    if (!eligible[i]) continue;
    out.noise_sites.push_back(new_idx);
    if (g.kind == GateKind::MS || g.kind == GateKind::XX) {
      const Gate same = g;
      for (int p = 0; p < n_pairs; ++p) {
        out.noise_sites.push_back(static_cast<int>(out.gates.size()));
        out.gates.push_back(same);
        out.gates.push_back(make1(GateKind::Z, g.qubits[0]));
        out.noise_sites.push_back(static_cast<int>(out.gates.size()));
        out.gates.push_back(same);
        out.gates.push_back(make1(GateKind::Z, g.qubits[0]));
      }
    } else if (g.kind == GateKind::CZ) {
      for (int p = 0; p < n_pairs; ++p) {
        out.noise_sites.push_back(static_cast<int>(out.gates.size()));
        out.gates.push_back(g);
        out.noise_sites.push_back(static_cast<int>(out.gates.size()));
        out.gates.push_back(g);
      }
    } else {
      throw std::invalid_argument("insert_redundant_pairs: noise site is not an entangler");
    }
  }
  return out;
}

VerifyReport verify_compile(const Circuit& in, const CompileResult& out) {
  const CMat u_in = circuit_unitary(in);
  CMat u_out = circuit_unitary(out.circuit);
  // Apply the pending RZ frame after the emitted circuit.
  CMat d = identity(1);
  for (int q = 0; q < in.n_qubits; ++q) d = kron(d, rz_m(out.pending_rz.at(q)));
  u_out = d * u_out;
  VerifyReport rep;
  rep.distance = phase_distance(u_in, u_out, &rep.phase);
  rep.equivalent = rep.distance < 1e-9;
  return rep;
}

Circuit repcode_encode_circuit(double phi) {
  Circuit c;
  c.n_qubits = 3;
  c.gates = {make1(GateKind::RX, 0, {phi}), make2(GateKind::CNOT, 0, 1),
             make2(GateKind::CNOT, 0, 2)};
  c.noise_sites = {1, 2};
  return c;
}

Circuit repcode_harness_circuit(double phi, double theta0, int pauli_case) {
  Circuit c;
  c.n_qubits = 3;
  c.gates = {make1(GateKind::RX, 0, {phi}),      make2(GateKind::CNOT, 0, 1),
             make2(GateKind::CNOT, 0, 2),        make1(GateKind::RY, 0, {theta0}),
             make2(GateKind::CNOT, 0, 1),        make2(GateKind::CNOT, 0, 2)};
  c.noise_sites = {1, 2};
  if (pauli_case == 2) {
    c.gates.push_back(make1(GateKind::RZ, 0, {-kPi}));
    c.gates.push_back(make1(GateKind::RY, 0, {kPi / 2}));
  } else if (pauli_case == 3) {
    c.gates.push_back(make1(GateKind::RZ, 0, {-kPi / 2}));
    c.gates.push_back(make1(GateKind::RY, 0, {kPi / 2}));
  } else if (pauli_case != 1) {
    throw std::invalid_argument("repcode_harness_circuit: case must be 1..3");
  }
  return c;
}

Circuit repcode_5q_circuit(double phi, double theta0) {
  Circuit c;
  c.n_qubits = 5;
  c.gates = {make1(GateKind::RX, 0, {phi}),      make2(GateKind::CNOT, 0, 1),
             make2(GateKind::CNOT, 0, 2),        make1(GateKind::RY, 0, {theta0}),
             make2(GateKind::CNOT, 0, 3),        make2(GateKind::CNOT, 1, 3),
             make2(GateKind::CNOT, 1, 4),        make2(GateKind::CNOT, 2, 4)};
  c.noise_sites = {1, 2};
  return c;
}

}  // namespace qreshape
