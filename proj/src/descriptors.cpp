#include "opcalc/descriptors.hpp"

#include "opcalc/averaging.hpp"
#include "opcalc/errors.hpp"

#include <cmath>
#include <limits>

namespace opcalc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidArgument(path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string kind_of(const Json& j, const std::string& path) {
  const Json& k = field(j, "kind", path);
  if (!k.is_string()) fail(path + ".kind", "expected a string");
  return k.get<std::string>();
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t dimension(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0) fail(path, "expected a positive integer");
  return j.get<std::size_t>();
}

// Box sides accept null and "inf"/"-inf" strings for unbounded coordinates.
Vector parse_bound(const Json& j, const std::string& path, double open) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (e.is_null()) {
      v[static_cast<Eigen::Index>(i)] = open;
    } else if (e.is_string()) {
      const auto s = e.get<std::string>();
      if (s == "inf" || s == "+inf") v[static_cast<Eigen::Index>(i)] = std::numeric_limits<double>::infinity();
      else if (s == "-inf") v[static_cast<Eigen::Index>(i)] = -std::numeric_limits<double>::infinity();
      else fail(at, "unknown bound '" + s + "'");
    } else {
      v[static_cast<Eigen::Index>(i)] = number(e, at);
    }
  }
  return v;
}

HintBox bounding(const std::vector<HintBox>& boxes) {
  HintBox out = boxes.front();
  for (const auto& b : boxes) {
    out.lo = out.lo.cwiseMin(b.lo);
    out.hi = out.hi.cwiseMax(b.hi);
  }
  return out;
}

}  // namespace

Vector parse_vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix parse_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = parse_vector(j[r], path + "[" + std::to_string(r) + "]");
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows), row.size());
    if (row.size() != m.cols()) fail(path, "rows differ in length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

ConvexSetPtr parse_set(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "box") {
    const double inf = std::numeric_limits<double>::infinity();
    return std::make_shared<Box>(parse_bound(field(j, "lo", path), path + ".lo", -inf),
                                 parse_bound(field(j, "hi", path), path + ".hi", inf));
  }
  if (kind == "ball")
    return std::make_shared<Ball>(parse_vector(field(j, "center", path), path + ".center"),
                                  number(field(j, "radius", path), path + ".radius"));
  if (kind == "affine") {
    const Vector point = parse_vector(field(j, "point", path), path + ".point");
    const Json& b = field(j, "basis", path);
    if (!b.is_array()) fail(path + ".basis", "expected an array of vectors");
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < b.size(); ++i)
      basis.push_back(parse_vector(b[i], path + ".basis[" + std::to_string(i) + "]"));
    return std::make_shared<AffineSet>(point, std::move(basis));
  }
  if (kind == "epigraph") {
    const Json& f = field(j, "function", path);
    const std::string name = f.is_string() ? f.get<std::string>() : "";
    if (name == "exp") return std::make_shared<Epigraph>(EpigraphSpec::exp());
    if (name == "square") return std::make_shared<Epigraph>(EpigraphSpec::square());
    fail(path + ".function", "expected \"exp\" or \"square\"");
  }
  fail(path + ".kind", "unknown set kind '" + kind + "'");
}

ConvexFunctionPtr parse_function(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "quadratic")
    return std::make_shared<QuadraticFunction>(number(field(j, "a", path), path + ".a"),
                                               parse_vector(field(j, "b", path), path + ".b"));
  if (kind == "abs") {
    dimension(field(j, "dim", path), path + ".dim");
    return std::make_shared<AbsFunction>();
  }
  if (kind == "exp") {
    dimension(field(j, "dim", path), path + ".dim");
    return std::make_shared<SeparableSmoothFunction>(SmoothScalarFunction::exp());
  }
  if (kind == "linear") return std::make_shared<LinearFunction>(parse_vector(field(j, "c", path), path + ".c"));
  if (kind == "indicator") return std::make_shared<IndicatorFunction>(parse_set(field(j, "set", path), path + ".set"));
  fail(path + ".kind", "unknown function kind '" + kind + "'");
}

namespace {

// Dimension a function description fixes, if any.
std::size_t function_dim(const Json& j, const ConvexFunction& f, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "quadratic") return field(j, "b", path).size();
  if (kind == "linear") return field(j, "c", path).size();
  if (kind == "indicator") return static_cast<const IndicatorFunction&>(f).set()->dim();
  return dimension(field(j, "dim", path), path + ".dim");
}

}  // namespace

OperatorSpec parse_operator(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "identity") {
    const std::size_t d = dimension(field(j, "dim", path), path + ".dim");
    return {identity_map(d), HintBox::unbounded(d)};
  }
  if (kind == "linear") {
    LinearMonotoneOperator op(parse_matrix(field(j, "matrix", path), path + ".matrix"));
    return {op.resolvent(), HintBox::unbounded(op.dim())};
  }
  if (kind == "projection") {
    auto set = parse_set(field(j, "set", path), path + ".set");
    HintBox hint = set->hint_box();
    return {projection_map(std::move(set)), std::move(hint)};
  }
  if (kind == "prox") {
    const Json& fj = field(j, "function", path);
    auto f = parse_function(fj, path + ".function");
    const std::size_t d = function_dim(fj, *f, path + ".function");
    HintBox hint = f->domain_box(d);
    return {prox_map(ProxOracle(std::move(f)), d), std::move(hint)};
  }
  if (kind == "translation") {
    Vector v = parse_vector(field(j, "v", path), path + ".v");
    const auto d = static_cast<std::size_t>(v.size());
    return {translation_map(std::move(v)), HintBox::unbounded(d)};
  }
  if (kind == "average") {
    const Json& members = field(j, "members", path);
    const Json& weights = field(j, "weights", path);
    if (!members.is_array() || members.empty()) fail(path + ".members", "expected a non-empty array");
    if (!weights.is_array() || weights.size() != members.size())
      fail(path + ".weights", "expected one weight per member");
    std::vector<FirmlyNonexpansiveMap> maps;
    std::vector<HintBox> hints;
    std::vector<double> w;
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto spec = parse_operator(members[i], path + ".members[" + std::to_string(i) + "]");
      maps.push_back(std::move(spec.resolvent));
      hints.push_back(std::move(spec.hint));
      w.push_back(number(weights[i], path + ".weights[" + std::to_string(i) + "]"));
    }
    for (const auto& m : maps)
      if (m.dim() != maps.front().dim()) fail(path + ".members", "members differ in dimension");
    HintBox hint = bounding(hints);
    return {average_maps(WeightedFamily(std::move(maps), std::move(w))), std::move(hint)};
  }
  if (kind == "resolvent_of") {
    auto inner = parse_operator(field(j, "operator", path), path + ".operator");
    bool inverse = false;
    if (const auto it = j.find("inverse"); it != j.end()) {
      if (!it->is_boolean()) fail(path + ".inverse", "expected a boolean");
      inverse = it->get<bool>();
    }
    if (!inverse) return inner;
    return {complement_map(inner.resolvent), HintBox::unbounded(inner.resolvent.dim())};
  }
  fail(path + ".kind", "unknown operator kind '" + kind + "'");
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

}  // namespace opcalc
