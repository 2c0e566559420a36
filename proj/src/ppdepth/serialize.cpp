#include "ppdepth/serialize.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ppdepth/error.hpp"
#include "ppdepth/textio.hpp"

namespace ppdepth::serialize {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "ppdepth-model";
constexpr int kVersion = 1;

std::string kind_name(depth::ConditionalKind kind) {
  switch (kind) {
    case depth::ConditionalKind::hpp:
      return "hpp";
    case depth::ConditionalKind::sample_dirichlet:
      return "sample-dirichlet";
    case depth::ConditionalKind::ts_dirichlet:
      return "ts-dirichlet";
    case depth::ConditionalKind::mahalanobis:
      return "mahalanobis";
  }
  raise(ErrorCode::invalid_argument, "unknown conditional kind");
}

json card_to_json(const cardinality::CardinalityModel& card) {
  json j;
  j["cap"] = card.cap();
  switch (card.kind()) {
    case cardinality::Kind::empirical:
      j["kind"] = "empirical";
      j["pmf"] = card.empirical_pmf();
      break;
    case cardinality::Kind::poisson:
      j["kind"] = "poisson";
      j["mean"] = card.poisson_mean();
      break;
    case cardinality::Kind::poisson_mixture:
      j["kind"] = "poisson-mixture";
      j["weights"] = card.mixture_weights();
      j["means"] = card.mixture_means();
      break;
  }
  return j;
}

cardinality::CardinalityModel card_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "empirical") {
    return cardinality::CardinalityModel::empirical(
        j.at("pmf").get<std::vector<double>>());
  }
  const long long cap = j.at("cap").get<long long>();
  if (kind == "poisson") {
    return cardinality::CardinalityModel::poisson(
        j.at("mean").get<double>(), cap);
  }
  if (kind == "poisson-mixture") {
    return cardinality::CardinalityModel::poisson_mixture(
        j.at("weights").get<std::vector<double>>(),
        j.at("means").get<std::vector<double>>(), cap);
  }
  raise(ErrorCode::parse_error, "unknown cardinality kind '" + kind + "'");
}

json model_to_json(const depth::DepthModel& model) {
  json j;
  j["format"] = kFormatTag;
  j["version"] = kVersion;
  j["domain"] = {{"t1", model.domain().t1}, {"t2", model.domain().t2}};
  j["r"] = model.r();
  j["cardinality"] = card_to_json(model.card());

  json c;
  c["kind"] = kind_name(model.kind());
  switch (model.kind()) {
    case depth::ConditionalKind::hpp:
      break;
    case depth::ConditionalKind::sample_dirichlet: {
      json rows = json::object();
      for (const auto& [k, row] : model.means().rows()) {
        rows[std::to_string(k)] = row;
      }
      c["means"] = std::move(rows);
      break;
    }
    case depth::ConditionalKind::ts_dirichlet: {
      const auto& m = model.intensity();
      c["intensity"] = {{"t", m.grid_times()},
                        {"lambda", m.grid_lambdas()},
                        {"cumulative", m.grid_cumulative()}};
      break;
    }
    case depth::ConditionalKind::mahalanobis: {
      json rows = json::object();
      for (const auto& [k, row] : model.mahalanobis_table()) {
        rows[std::to_string(k)] = {{"mean", row.mean},
                                   {"covariance", row.covariance},
                                   {"ridge", row.ridge}};
      }
      c["rows"] = std::move(rows);
      break;
    }
  }
  j["conditional"] = std::move(c);
  return j;
}

long long parse_row_key(const std::string& key) {
  try {
    std::size_t used = 0;
    const long long k = std::stoll(key, &used);
    if (used != key.size() || k < 1) throw std::invalid_argument(key);
    return k;
  } catch (const std::exception&) {
    raise(ErrorCode::parse_error,
          "conditional table key '" + key + "' is not a positive integer");
  }
}

depth::DepthModel model_from_json(const json& j) {
  if (j.at("format").get<std::string>() != kFormatTag) {
    raise(ErrorCode::parse_error, "not a depth model document");
  }
  if (j.at("version").get<int>() != kVersion) {
    raise(ErrorCode::parse_error,
          "unsupported model version " + j.at("version").dump());
  }
  const TimeDomain domain(j.at("domain").at("t1").get<double>(),
                          j.at("domain").at("t2").get<double>());
  const double r = j.at("r").get<double>();
  cardinality::CardinalityModel card = card_from_json(j.at("cardinality"));

  const json& c = j.at("conditional");
  const std::string kind = c.at("kind").get<std::string>();
  if (kind == "hpp") {
    return depth::DepthModel::hpp(domain, std::move(card), r);
  }
  if (kind == "sample-dirichlet") {
    std::map<long long, std::vector<double>> rows;
    for (const auto& [key, value] : c.at("means").items()) {
      rows.emplace(parse_row_key(key), value.get<std::vector<double>>());
    }
    return depth::DepthModel::sample_dirichlet(
        std::move(card), r,
        depth::ConditionalMeanTable(domain, std::move(rows)));
  }
  if (kind == "ts-dirichlet") {
    const json& m = c.at("intensity");
    rescale::IntensityModel intensity = rescale::IntensityModel::from_arrays(
        m.at("t").get<std::vector<double>>(),
        m.at("lambda").get<std::vector<double>>(),
        m.at("cumulative").get<std::vector<double>>());
    if (!(intensity.domain() == domain)) {
      raise(ErrorCode::parse_error,
            "intensity grid does not span the declared domain");
    }
    return depth::DepthModel::ts_dirichlet(std::move(card), r,
                                           std::move(intensity));
  }
  if (kind == "mahalanobis") {
    depth::MahalanobisTable table;
    for (const auto& [key, value] : c.at("rows").items()) {
      table.emplace(parse_row_key(key),
                    depth::MahalanobisRow{
                        value.at("mean").get<std::vector<double>>(),
                        value.at("covariance").get<std::vector<double>>(),
                        value.at("ridge").get<double>()});
    }
    return depth::DepthModel::mahalanobis(domain, std::move(card), r,
                                          std::move(table));
  }
  raise(ErrorCode::parse_error, "unknown conditional kind '" + kind + "'");
}

}  // namespace

std::string model_to_text(const depth::DepthModel& model) {
  return model_to_json(model).dump(2) + "\n";
}

depth::DepthModel model_from_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error, std::string("invalid model JSON: ") +
                                      e.what());
  }
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    raise(ErrorCode::parse_error,
          std::string("malformed model document: ") + e.what());
  }
}

depth::DepthModel read_model_file(const std::string& path) {
  return model_from_text(read_text_file(path));
}

void write_model_file(const std::string& path,
                      const depth::DepthModel& model) {
  write_text_file(path, model_to_text(model));
}

}  // namespace ppdepth::serialize
