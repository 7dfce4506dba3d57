/*
 * Copyright 2026 The ildg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ildg/core/flatten.hpp"

#include <array>
#include <stdexcept>

#include "ildg/core/gfn.hpp"

namespace ildg {

namespace {

constexpr std::array kColumns = {
    ColumnInfo{"gfn", ColumnType::String},
    ColumnInfo{"ensembleId", ColumnType::String},
    ColumnInfo{"projectName", ColumnType::String},
    ColumnInfo{"institution", ColumnType::String},
    ColumnInfo{"collaboration", ColumnType::String},
    ColumnInfo{"series", ColumnType::String},
    ColumnInfo{"updates", ColumnType::Integer},
    ColumnInfo{"date", ColumnType::String},
    ColumnInfo{"nx", ColumnType::Integer},
    ColumnInfo{"ny", ColumnType::Integer},
    ColumnInfo{"nz", ColumnType::Integer},
    ColumnInfo{"nt", ColumnType::Integer},
    ColumnInfo{"actionName", ColumnType::String},
    ColumnInfo{"beta", ColumnType::Decimal},
    ColumnInfo{"avePlaquette", ColumnType::Decimal},
    ColumnInfo{"crc32", ColumnType::String},
    ColumnInfo{"size", ColumnType::Integer},
    ColumnInfo{"withdrawn", ColumnType::Boolean},
    ColumnInfo{"version", ColumnType::Integer},
};

}  // namespace

std::span<const ColumnInfo> flat_columns() { return kColumns; }

std::optional<ColumnInfo> find_column(std::string_view name) {
  for (const auto& c : kColumns) {
    if (c.name == name) return c;
  }
  return std::nullopt;
}

ColumnValue column_value(const FlatRecord& r, std::string_view column) {
  if (column == "gfn") return r.gfn;
  if (column == "ensembleId") return r.ensemble_id;
  if (column == "projectName") return r.project_name;
  if (column == "institution") return r.institution;
  if (column == "collaboration") return r.collaboration;
  if (column == "series") return r.series;
  if (column == "updates") return r.updates;
  if (column == "date") return r.date;
  if (column == "nx") return r.nx;
  if (column == "ny") return r.ny;
  if (column == "nz") return r.nz;
  if (column == "nt") return r.nt;
  if (column == "actionName") return r.action_name;
  if (column == "beta") return DecimalValue{r.beta};
  if (column == "avePlaquette") return DecimalValue{r.ave_plaquette};
  if (column == "crc32") return r.crc32;
  if (column == "size") return r.size;
  if (column == "withdrawn") return r.withdrawn;
  if (column == "version") return r.version;
  throw std::out_of_range("unknown column " + std::string(column));
}

std::string column_text(const FlatRecord& record, std::string_view column) {
  const ColumnValue value = column_value(record, column);
  if (auto s = std::get_if<std::string>(&value)) return *s;
  if (auto i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (auto d = std::get_if<DecimalValue>(&value)) return d->text;
  return std::get<bool>(value) ? "true" : "false";
}

FlatRecord flatten(const ConfigurationMetadata& config, const EnsembleMetadata& ensemble,
                   bool withdrawn, std::int64_t version) {
  FlatRecord r;
  r.gfn = derive_gfn(config, ensemble).str();
  r.ensemble_id = ensemble.ensemble_id;
  r.project_name = ensemble.project_name;
  r.institution = ensemble.institution;
  r.collaboration = ensemble.collaboration.value_or("");
  r.series = config.series;
  r.updates = config.update;
  r.date = config.date;
  r.nx = ensemble.lattice.nx;
  r.ny = ensemble.lattice.ny;
  r.nz = ensemble.lattice.nz;
  r.nt = ensemble.lattice.nt;
  r.action_name = ensemble.action_name;
  r.beta = ensemble.beta;
  r.ave_plaquette = config.ave_plaquette.value_or("");
  r.crc32 = config.crc32;
  r.size = config.size;
  r.withdrawn = withdrawn;
  r.version = version;
  return r;
}

void to_json(nlohmann::json& j, const FlatRecord& r) {
  j = nlohmann::json{
      {"gfn", r.gfn},
      {"ensembleId", r.ensemble_id},
      {"projectName", r.project_name},
      {"institution", r.institution},
      {"collaboration", r.collaboration},
      {"series", r.series},
      {"updates", r.updates},
      {"date", r.date},
      {"nx", r.nx},
      {"ny", r.ny},
      {"nz", r.nz},
      {"nt", r.nt},
      {"actionName", r.action_name},
      {"beta", r.beta},
      {"avePlaquette", r.ave_plaquette},
      {"crc32", r.crc32},
      {"size", r.size},
      {"withdrawn", r.withdrawn},
      {"version", r.version},
  };
}

void from_json(const nlohmann::json& j, FlatRecord& r) {
  j.at("gfn").get_to(r.gfn);
  j.at("ensembleId").get_to(r.ensemble_id);
  j.at("projectName").get_to(r.project_name);
  j.at("institution").get_to(r.institution);
  j.at("collaboration").get_to(r.collaboration);
  j.at("series").get_to(r.series);
  j.at("updates").get_to(r.updates);
  j.at("date").get_to(r.date);
  j.at("nx").get_to(r.nx);
  j.at("ny").get_to(r.ny);
  j.at("nz").get_to(r.nz);
  j.at("nt").get_to(r.nt);
  j.at("actionName").get_to(r.action_name);
  j.at("beta").get_to(r.beta);
  j.at("avePlaquette").get_to(r.ave_plaquette);
  j.at("crc32").get_to(r.crc32);
  j.at("size").get_to(r.size);
  j.at("withdrawn").get_to(r.withdrawn);
  j.at("version").get_to(r.version);
}

}  // namespace ildg
