#include "qmix/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qmix/basis.hpp"

namespace qmix {

namespace {

int read_dim(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw ParseError("state JSON must be an object with an integer \"dim\"");
  }
  const int d = j["dim"].get<int>();
  if (d < 2) throw ParseError("\"dim\" must be >= 2");
  return d;
}

Eigen::VectorXd read_coeffs(const nlohmann::json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d * d) {
    throw ParseError("\"coeffs\" must be an array of length dim^2");
  }
  Eigen::VectorXd r(d * d);
  for (int i = 0; i < d * d; ++i) {
    if (!j[i].is_number()) throw ParseError("\"coeffs\" entries must be numbers");
    r[i] = j[i].get<double>();
  }
  return r;
}

Eigen::MatrixXcd read_matrix(const nlohmann::json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw ParseError("\"matrix\" must be a dim x dim array");
  }
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      throw ParseError("\"matrix\" must be a dim x dim array");
    }
    for (int k = 0; k < d; ++k) {
      const auto& e = row[k];
      if (!e.is_object() || !e.contains("re") || !e.contains("im") ||
          !e["re"].is_number() || !e["im"].is_number()) {
        throw ParseError("matrix entries must be {\"re\": .., \"im\": ..}");
      }
      m(i, k) = std::complex<double>(e["re"].get<double>(), e["im"].get<double>());
    }
  }
  return m;
}

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON in " + path);
  return j;
}

}  // namespace

CoeffVector state_from_json(const nlohmann::json& j) {
  const int d = read_dim(j);
  if (j.contains("coeffs")) {
    return {d, read_coeffs(j["coeffs"], d)};
  }
  if (j.contains("matrix")) {
    const HermitianBasis basis = HermitianBasis::build(d);
    try {
      return {d, vectorize(read_matrix(j["matrix"], d), basis)};
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("state JSON needs either \"coeffs\" or \"matrix\"");
}

StateSet state_set_from_json(const nlohmann::json& j) {
  const int d = read_dim(j);
  if (!j.contains("states") || !j["states"].is_array() || j["states"].empty()) {
    throw ParseError("state set JSON needs a nonempty \"states\" array");
  }
  StateSet s;
  s.dim = d;
  const auto& states = j["states"];
  s.vectors.resize(d * d, static_cast<int>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    nlohmann::json entry = states[i];
    if (!entry.contains("dim")) entry["dim"] = d;
    const CoeffVector v = state_from_json(entry);
    if (v.dim != d) throw ParseError("state set member has mismatched dimension");
    s.vectors.col(static_cast<int>(i)) = v.coeffs;
  }
  if (j.contains("labels")) {
    if (!j["labels"].is_array() || j["labels"].size() != states.size()) {
      throw ParseError("\"labels\" must match the number of states");
    }
    for (const auto& l : j["labels"]) s.labels.push_back(l.get<std::string>());
  }
  return s;
}

nlohmann::json state_to_json(const CoeffVector& v) {
  nlohmann::json j;
  j["dim"] = v.dim;
  j["coeffs"] = std::vector<double>(v.coeffs.data(), v.coeffs.data() + v.coeffs.size());
  return j;
}

nlohmann::json state_set_to_json(const StateSet& s) {
  nlohmann::json j;
  j["dim"] = s.dim;
  j["states"] = nlohmann::json::array();
  for (int i = 0; i < s.size(); ++i) {
    nlohmann::json st;
    st["coeffs"] = std::vector<double>(s.vectors.col(i).data(),
                                       s.vectors.col(i).data() + s.vectors.rows());
    j["states"].push_back(st);
  }
  if (!s.labels.empty()) j["labels"] = s.labels;
  return j;
}

CoeffVector load_state(const std::string& path) {
  return state_from_json(parse_file(path));
}

StateSet load_state_set(const std::string& path) {
  return state_set_from_json(parse_file(path));
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "k,distance,minimal_n,support,weights\n";
  for (const auto& rec : records) {
    os << format_number(rec.k) << ',' << format_number(rec.distance) << ','
       << rec.minimal_n << ',';
    for (std::size_t i = 0; i < rec.support.size(); ++i) {
      if (i) os << ';';
      os << rec.support[i];
    }
    os << ',';
    for (int i = 0; i < rec.weights.size(); ++i) {
      if (i) os << ';';
      os << format_number(rec.weights[i]);
    }
    os << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::vector<SweepRecord> records;
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty sweep CSV");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    SweepRecord rec;
    if (!std::getline(ss, field, ',')) throw ParseError("bad sweep CSV row");
    rec.k = std::stod(field);
    if (!std::getline(ss, field, ',')) throw ParseError("bad sweep CSV row");
    rec.distance = std::stod(field);
    if (!std::getline(ss, field, ',')) throw ParseError("bad sweep CSV row");
    rec.minimal_n = std::stoi(field);
    if (!std::getline(ss, field, ',')) throw ParseError("bad sweep CSV row");
    {
      std::stringstream fs(field);
      std::string tok;
      while (std::getline(fs, tok, ';')) rec.support.push_back(std::stoi(tok));
    }
    if (!std::getline(ss, field)) throw ParseError("bad sweep CSV row");
    {
      std::stringstream fs(field);
      std::string tok;
      std::vector<double> w;
      while (std::getline(fs, tok, ';')) w.push_back(std::stod(tok));
      rec.weights = Eigen::Map<Eigen::VectorXd>(w.data(), w.size());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace qmix
