#include "smashline/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace smashline {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const SmashElement& e) {
  Json terms = Json::array();
  for (const auto& [key, c] : e.terms()) {
    terms.push_back(Json{{"k", key.first}, {"l", key.second}, {"c", complex_to_json(c)}});
  }
  return Json{{"N", e.deformation().order}, {"x_cap", e.x_cap()}, {"terms", terms}};
}

SmashElement smash_element_from_json(const Json& j) {
  const Deformation d(j.at("N").get<int>());
  SmashElement e(d, j.value("x_cap", SmashElement::kDefaultXCap));
  for (const Json& t : j.at("terms")) {
    const auto& c = t.at("c");
    e.add_term(t.at("k").get<int>(), t.at("l").get<int>(),
               Complex{c.at(0).get<double>(), c.at(1).get<double>()});
  }
  return e;
}

Json to_json(const MultiSlotExpansion& e) {
  Json terms = Json::array();
  for (const auto& [key, c] : e.terms()) {
    terms.push_back(Json{{"powers", key}, {"c", complex_to_json(c)}});
  }
  return Json{{"n", e.slots()}, {"terms", terms}};
}

Json matrix_to_json(const RepMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(complex_to_json(m(r, c)));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << content;
  if (!out) throw ValidationError("failed writing output file: " + path);
}

}  // namespace smashline
