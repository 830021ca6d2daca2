// Copyright 2026 The sctk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sctk/report.h"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "sctk/error.h"

namespace sctk {
namespace {

using Json = nlohmann::ordered_json;

std::string FormatNumber(double v, const char* fmt) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string Exact(double v) { return FormatNumber(v, "%.17g"); }
std::string Short(double v) { return FormatNumber(v, "%.4g"); }

Json Number(double v) {
  if (std::isfinite(v)) return v;
  return FormatNumber(v, "%g");
}

double ReadNumber(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  Fail(ErrorCode::kFormat, "report JSON: bad number '" + s + "'");
}

Json StatJson(const MeanStd& s) {
  return Json{{"mean", Number(s.mean)}, {"std", Number(s.std)}, {"n", s.n}};
}

MeanStd ReadStat(const Json& j) {
  MeanStd s;
  s.mean = ReadNumber(j.at("mean"));
  s.std = ReadNumber(j.at("std"));
  s.n = j.at("n").get<std::size_t>();
  return s;
}

Json OptionalNumber(const std::optional<double>& v) {
  return v ? Number(*v) : Json(nullptr);
}

Json ModelJson(const ModelReport& m) {
  Json patients = Json::array();
  for (const auto& p : m.patients) {
    patients.push_back(Json{{"patient_id", p.patient_id},
                            {"ssim", Number(p.ssim)},
                            {"psnr", Number(p.psnr)},
                            {"mae", Number(p.mae)},
                            {"mse", Number(p.mse)},
                            {"simos", Number(p.simos)},
                            {"iou_2d", OptionalNumber(p.iou_2d)},
                            {"iou_3d", OptionalNumber(p.iou_3d)}});
  }
  Json exclusions = Json::array();
  for (const auto& e : m.exclusions) {
    exclusions.push_back(
        Json{{"patient_id", e.patient_id}, {"code", e.code}, {"reason", e.reason}});
  }
  return Json{
      {"model", m.model},
      {"metrics",
       Json{{"ssim", StatJson(m.ssim)},
            {"psnr", StatJson(m.psnr)},
            {"mae", StatJson(m.mae)},
            {"mse", StatJson(m.mse)},
            {"fid", Json{{"value", Number(m.fid)}, {"slices", m.fid_slices}}},
            {"simos", StatJson(m.simos)},
            {"iou_2d", StatJson(m.iou_2d)},
            {"iou_3d", StatJson(m.iou_3d)}}},
      {"alternative_aggregates",
       Json{{"ssim_slice_pooled", Number(m.ssim_slice_pooled)},
            {"psnr_slice_pooled", Number(m.psnr_slice_pooled)},
            {"iou_2d_label_pooled", Number(m.iou_2d_label_pooled)},
            {"iou_3d_label_pooled", Number(m.iou_3d_label_pooled)}}},
      {"patients", patients},
      {"exclusions", exclusions}};
}

std::string RenderJson(const MetricReport& r) {
  const Provenance& p = r.provenance;
  Json models = Json::array();
  for (const auto& m : r.models) models.push_back(ModelJson(m));
  Json doc{{"provenance",
            Json{{"toolkit_version", p.toolkit_version},
                 {"config_hash", p.config_hash},
                 {"dataset_hash", p.dataset_hash},
                 {"scale", p.scale},
                 {"seed", p.seed},
                 {"embedder", p.embedder},
                 {"seg_fraction", Number(p.seg_fraction)},
                 {"test_patients", p.test_patients},
                 {"seg_subset", p.seg_subset}}},
           {"models", models}};
  return doc.dump(2) + "\n";
}

std::string RenderCsv(const MetricReport& r) {
  std::string out =
      "model,scale,ssim_mean,ssim_std,psnr_mean,psnr_std,mae_mean,mae_std,mse_mean,"
      "mse_std,fid,simos_mean,simos_std,iou_2d_mean,iou_2d_std,iou_3d_mean,iou_3d_std,"
      "n_patients,n_excluded,fid_slices,ssim_slice_pooled,psnr_slice_pooled,"
      "iou_2d_label_pooled,iou_3d_label_pooled,config_hash,dataset_hash,seed\n";
  for (const auto& m : r.models) {
    const auto stat = [&](const MeanStd& s) { return Exact(s.mean) + "," + Exact(s.std) + ","; };
    out += m.model + "," + r.provenance.scale + ",";
    out += stat(m.ssim) + stat(m.psnr) + stat(m.mae) + stat(m.mse);
    out += Exact(m.fid) + ",";
    out += stat(m.simos) + stat(m.iou_2d) + stat(m.iou_3d);
    out += std::to_string(m.patients.size()) + "," + std::to_string(m.exclusions.size()) +
           "," + std::to_string(m.fid_slices) + ",";
    out += Exact(m.ssim_slice_pooled) + "," + Exact(m.psnr_slice_pooled) + "," +
           Exact(m.iou_2d_label_pooled) + "," + Exact(m.iou_3d_label_pooled) + ",";
    out += r.provenance.config_hash + "," + r.provenance.dataset_hash + "," +
           std::to_string(r.provenance.seed) + "\n";
  }
  return out;
}

std::string Cell(const MeanStd& s) {
  if (s.n == 0) return "n/a";
  return Short(s.mean) + " ± " + Short(s.std);
}

std::string RenderMarkdown(const MetricReport& r) {
  const Provenance& p = r.provenance;
  std::string out;
  out += "| Model | SSIM ↑ | PSNR ↑ | MAE ↓ | MSE ↓ | FID ↓ | SIMOS ↓ | 2D IoU ↑ | 3D IoU ↑ |\n";
  out += "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& m : r.models) {
    out += "| " + m.model + " | " + Cell(m.ssim) + " | " + Cell(m.psnr) + " | " +
           Cell(m.mae) + " | " + Cell(m.mse) + " | " + Short(m.fid) + " | " +
           Cell(m.simos) + " | " + Cell(m.iou_2d) + " | " + Cell(m.iou_3d) + " |\n";
  }
  out += "\n";
  out += "Values are mean ± std over patients, metric scale `" + p.scale + "`.\n\n";
  out += "- toolkit: " + p.toolkit_version + "\n";
  out += "- config hash: " + p.config_hash + "\n";
  out += "- dataset hash: " + p.dataset_hash + "\n";
  out += "- seed: " + std::to_string(p.seed) + "\n";
  out += "- embedder: " + p.embedder + "\n";
  out += "- test patients: " + std::to_string(p.test_patients.size()) +
         ", segmentation subset: " + std::to_string(p.seg_subset.size()) +
         " (fraction " + Short(p.seg_fraction) + ")\n";
  for (const auto& m : r.models) {
    out += "- " + m.model + ": " + std::to_string(m.patients.size()) + " evaluated, " +
           std::to_string(m.exclusions.size()) + " excluded\n";
    for (const auto& e : m.exclusions) {
      out += "  - excluded " + e.patient_id + " (" + e.code + "): " + e.reason + "\n";
    }
  }
  return out;
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  if (text == "markdown" || text == "md") return ReportFormat::kMarkdown;
  Fail(ErrorCode::kUsage, "unknown report format '" + std::string(text) + "'");
}

std::string RenderReport(const MetricReport& report, ReportFormat format) {
  if (report.models.empty()) Fail(ErrorCode::kUsage, "report has no models");
  switch (format) {
    case ReportFormat::kCsv:
      return RenderCsv(report);
    case ReportFormat::kJson:
      return RenderJson(report);
    case ReportFormat::kMarkdown:
      return RenderMarkdown(report);
  }
  Fail(ErrorCode::kUsage, "unknown report format");
}

MetricReport ParseReportJson(std::string_view text) {
  MetricReport r;
  try {
    const Json doc = Json::parse(text);
    const Json& p = doc.at("provenance");
    r.provenance.toolkit_version = p.at("toolkit_version").get<std::string>();
    r.provenance.config_hash = p.at("config_hash").get<std::string>();
    r.provenance.dataset_hash = p.at("dataset_hash").get<std::string>();
    r.provenance.scale = p.at("scale").get<std::string>();
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.embedder = p.at("embedder").get<std::string>();
    r.provenance.seg_fraction = ReadNumber(p.at("seg_fraction"));
    r.provenance.test_patients = p.at("test_patients").get<std::vector<std::string>>();
    r.provenance.seg_subset = p.at("seg_subset").get<std::vector<std::string>>();
    for (const Json& mj : doc.at("models")) {
      ModelReport m;
      m.model = mj.at("model").get<std::string>();
      const Json& metrics = mj.at("metrics");
      m.ssim = ReadStat(metrics.at("ssim"));
      m.psnr = ReadStat(metrics.at("psnr"));
      m.mae = ReadStat(metrics.at("mae"));
      m.mse = ReadStat(metrics.at("mse"));
      m.fid = ReadNumber(metrics.at("fid").at("value"));
      m.fid_slices = metrics.at("fid").at("slices").get<std::size_t>();
      m.simos = ReadStat(metrics.at("simos"));
      m.iou_2d = ReadStat(metrics.at("iou_2d"));
      m.iou_3d = ReadStat(metrics.at("iou_3d"));
      const Json& alt = mj.at("alternative_aggregates");
      m.ssim_slice_pooled = ReadNumber(alt.at("ssim_slice_pooled"));
      m.psnr_slice_pooled = ReadNumber(alt.at("psnr_slice_pooled"));
      m.iou_2d_label_pooled = ReadNumber(alt.at("iou_2d_label_pooled"));
      m.iou_3d_label_pooled = ReadNumber(alt.at("iou_3d_label_pooled"));
      for (const Json& pj : mj.at("patients")) {
        PatientMetrics pm;
        pm.patient_id = pj.at("patient_id").get<std::string>();
        pm.ssim = ReadNumber(pj.at("ssim"));
        pm.psnr = ReadNumber(pj.at("psnr"));
        pm.mae = ReadNumber(pj.at("mae"));
        pm.mse = ReadNumber(pj.at("mse"));
        pm.simos = ReadNumber(pj.at("simos"));
        if (!pj.at("iou_2d").is_null()) pm.iou_2d = ReadNumber(pj.at("iou_2d"));
        if (!pj.at("iou_3d").is_null()) pm.iou_3d = ReadNumber(pj.at("iou_3d"));
        m.patients.push_back(std::move(pm));
      }
      for (const Json& ej : mj.at("exclusions")) {
        m.exclusions.push_back({ej.at("patient_id").get<std::string>(),
                                ej.at("code").get<std::string>(),
                                ej.at("reason").get<std::string>()});
      }
      r.models.push_back(std::move(m));
    }
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("report JSON: ") + e.what());
  }
  return r;
}

std::string PatientMetricsCsv(const ModelReport& row) {
  std::string out = "patient_id,ssim,psnr,mae,mse,simos,iou_2d,iou_3d\n";
  for (const auto& p : row.patients) {
    out += p.patient_id + "," + Exact(p.ssim) + "," + Exact(p.psnr) + "," + Exact(p.mae) +
           "," + Exact(p.mse) + "," + Exact(p.simos) + "," +
           (p.iou_2d ? Exact(*p.iou_2d) : std::string()) + "," +
           (p.iou_3d ? Exact(*p.iou_3d) : std::string()) + "\n";
  }
  return out;
}

}  // namespace sctk
