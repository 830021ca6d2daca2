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

// sctk command line tool. Every pipeline stage is a subcommand. On failure
// the tool prints one JSON line {"error": <code>, "message": <text>} to
// stderr and exits nonzero (2 for usage errors, 1 otherwise).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sctk/config.h"
#include "sctk/dataset.h"
#include "sctk/error.h"
#include "sctk/evaluate.h"
#include "sctk/nifti.h"
#include "sctk/preprocess.h"
#include "sctk/report.h"
#include "sctk/seg_eval.h"
#include "sctk/slices.h"

namespace fs = std::filesystem;

namespace sctk {
namespace {

void WriteText(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + p.string() + " for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + p.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void Warn(const std::string& kind, const std::string& id, const std::string& text) {
  nlohmann::ordered_json j{{"warning", kind}, {"patient_id", id}, {"message", text}};
  std::cerr << j.dump() << "\n";
}

SplitRatios ParseRatios(const std::string& text) {
  std::vector<double> v;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      Fail(ErrorCode::kUsage, "bad ratio '" + item + "'");
    }
  }
  if (v.size() != 3) Fail(ErrorCode::kUsage, "--ratios needs three values train,val,test");
  SplitRatios r{v[0], v[1], v[2]};
  r.Validate();
  return r;
}

struct IngestArgs {
  std::string root;
  std::string out;
};

void RunIngest(const IngestArgs& a) {
  const Manifest m = BuildManifest(a.root);
  for (const auto& e : m.exclusions) Warn("excluded", e.patient_id, e.reason);
  WriteText(ManifestToCsv(m), a.out);
}

struct PreprocessArgs {
  std::string modality;
  std::string in;
  std::string out;
  bool inverse = false;
  NormalizationParams params;
};

void RunPreprocess(const PreprocessArgs& a) {
  a.params.Validate();
  Volume result;
  if (a.modality == "ct") {
    if (a.inverse) {
      result = DenormalizeCt(ReadNifti(a.in, ValueKind::kNormalized), a.params);
    } else {
      result = PreprocessCt(ReadNifti(a.in, ValueKind::kHounsfield), a.params);
    }
  } else if (a.inverse) {
    Fail(ErrorCode::kUsage, "--inverse applies to CT only");
  } else {
    result = PreprocessMri(ReadNifti(a.in, ValueKind::kRawIntensity), a.params);
  }
  WriteNifti(result, a.out);
}

struct SplitArgs {
  std::string root;
  std::string out;
  std::string ratios = "0.7,0.15,0.15";
  std::uint64_t seed = 0;
};

void RunSplit(const SplitArgs& a) {
  const SplitRatios ratios = ParseRatios(a.ratios);
  const Manifest m = BuildManifest(a.root);
  for (const auto& e : m.exclusions) Warn("excluded", e.patient_id, e.reason);
  const SplitAssignment split = StratifiedSplit(m.records, ratios, a.seed);
  for (const auto& w : split.warnings) Warn("split", "", w);
  WriteText(SplitToCsv(split), a.out);
}

struct SlicesArgs {
  std::string in;
  std::string out;
};

void RunSlices(const SlicesArgs& a) {
  const Volume v = ReadNifti(a.in);
  WriteSliceStack(ExtractTransverseSlices(v), v.geometry(), a.out);
}

struct MultichannelArgs {
  std::string mri;
  std::string ct;
  std::string out;
  std::size_t k = 3;
  bool normalize = false;
};

// Writes one k-plane input volume and one single-plane target per sample,
// plus index.csv with "index,center,input,target" rows.
void RunMultichannel(const MultichannelArgs& a) {
  Volume mri = ReadNifti(a.mri, ValueKind::kRawIntensity);
  Volume ct = ReadNifti(a.ct, a.normalize ? ValueKind::kHounsfield : ValueKind::kRawIntensity);
  if (a.normalize) {
    mri = PreprocessMri(mri);
    ct = PreprocessCt(ct);
  }
  const auto pairs = PairSlices(mri, ct);
  std::vector<Slice> src, tgt;
  for (const auto& p : pairs) {
    src.push_back(p.source);
    tgt.push_back(p.target);
  }
  const auto samples = BuildMultichannel(src, tgt, a.k);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  VolumeGeometry in_geom = mri.geometry();
  in_geom.dims.nz = a.k;
  VolumeGeometry out_geom = ct.geometry();
  out_geom.dims.nz = 1;
  std::string index = "index,center,input,target\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char in_name[32];
    char tgt_name[32];
    std::snprintf(in_name, sizeof(in_name), "mc_%04zu.nii", i);
    std::snprintf(tgt_name, sizeof(tgt_name), "target_%04zu.nii", i);
    const auto& s = samples[i];
    WriteNifti(StackSlices(s.channels, in_geom, ValueKind::kRawIntensity), dir / in_name);
    WriteNifti(StackSlices(std::span(&s.target, 1), out_geom, ValueKind::kRawIntensity),
               dir / tgt_name);
    index += std::to_string(i) + "," + std::to_string(s.center_index) + "," + in_name +
             "," + tgt_name + "\n";
  }
  WriteText(index, (dir / "index.csv").string());
}

struct StackArgs {
  std::string index;
  std::string templ;
  std::string out;
};

void RunStack(const StackArgs& a) {
  const VolumeGeometry g = ReadNiftiGeometry(a.templ);
  const auto slices = ReadSliceStack(a.index);
  WriteNifti(StackSlices(slices, g, ValueKind::kRawIntensity), a.out);
}

struct EvalArgs {
  std::string config;
  std::vector<std::string> models;
  std::optional<std::uint64_t> seed;
  std::string scale;
  std::optional<std::size_t> jobs;
  std::string out_dir;
};

void RunEval(const EvalArgs& a) {
  RunConfig c = LoadRunConfig(a.config);
  if (!a.models.empty()) c.models = a.models;
  if (a.seed) c.seed = *a.seed;
  if (!a.scale.empty()) c.scale = ParseMetricScale(a.scale);
  if (a.jobs) c.jobs = *a.jobs;
  if (!a.out_dir.empty()) c.output_dir = a.out_dir;
  const MetricReport report = EvaluateRun(c);
  fs::create_directories(c.output_dir);
  WriteText(RenderReport(report, ReportFormat::kJson), (c.output_dir / "report.json").string());
  for (const auto& m : report.models) {
    WriteText(PatientMetricsCsv(m), (c.output_dir / ("patients_" + m.model + ".csv")).string());
    for (const auto& e : m.exclusions) Warn("excluded", e.patient_id, m.model + ": " + e.reason);
  }
}

struct ReportArgs {
  std::string in;
  std::string format = "markdown";
  std::string out;
};

void RunReport(const ReportArgs& a) {
  const ReportFormat format = ParseReportFormat(a.format);
  WriteText(RenderReport(ParseReportJson(ReadText(a.in)), format), a.out);
}

struct SegEvalArgs {
  std::string gt;
  std::string pred;
  std::string gt_labels;
  std::string pred_labels;
  std::string mode = "3d";
  std::string out;
};

nlohmann::ordered_json JsonNumber(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

void RunSegEval(const SegEvalArgs& a) {
  const auto load = [](const std::string& mask, const std::string& labels) {
    return labels.empty() ? ReadLabelMask(mask) : ReadLabelMask(mask, labels);
  };
  const LabelMaskVolume gt = load(a.gt, a.gt_labels);
  const LabelMaskVolume pred = load(a.pred, a.pred_labels);
  MeanIouResult r;
  if (a.mode == "3d") {
    r = MeanLabelIou(gt, pred);
  } else if (a.mode == "2d") {
    r = MeanSliceIou(gt, pred);
  } else {
    Fail(ErrorCode::kUsage, "--mode must be 2d or 3d");
  }
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (const auto& l : r.per_label) labels.push_back({{"name", l.name}, {"iou", JsonNumber(l.iou)}});
  nlohmann::ordered_json j{{"mode", a.mode}, {"mean_iou", JsonNumber(r.mean)}, {"labels", labels}};
  WriteText(j.dump(2) + "\n", a.out);
}

void PrintError(std::string_view code, const std::string& message) {
  nlohmann::ordered_json j{{"error", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

int Main(int argc, char** argv) {
  CLI::App app{"Synthetic CT evaluation toolkit", "sctk"};
  app.set_version_flag("--version", ToolkitVersion());
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Scan a dataset root and write the manifest CSV");
  c_ingest->add_option("--root", ingest.root, "Dataset root")->required();
  c_ingest->add_option("--out", ingest.out, "Output CSV (default stdout)");

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("preprocess", "Normalize a CT or MRI volume");
  c_pre->add_option("--modality", pre.modality, "ct or mri")
      ->required()
      ->check(CLI::IsMember({"ct", "mri"}));
  c_pre->add_option("--in", pre.in, "Input NIfTI")->required();
  c_pre->add_option("--out", pre.out, "Output NIfTI")->required();
  c_pre->add_flag("--inverse", pre.inverse, "Map normalized CT back to HU");
  c_pre->add_option("--ct-floor", pre.params.ct_floor, "CT floor in HU");
  c_pre->add_option("--ct-cap", pre.params.ct_cap, "CT cap in HU");
  c_pre->add_option("--mri-percentile", pre.params.mri_percentile, "MRI upper percentile");

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "Stratified per-patient train/val/test split");
  c_split->add_option("--root", split.root, "Dataset root")->required();
  c_split->add_option("--out", split.out, "Output CSV (default stdout)");
  c_split->add_option("--ratios", split.ratios, "train,val,test");
  c_split->add_option("--seed", split.seed, "Split seed");

  SlicesArgs slices;
  auto* c_slices = app.add_subcommand("slices", "Write the transverse slices of a volume");
  c_slices->add_option("--in", slices.in, "Input NIfTI")->required();
  c_slices->add_option("--out", slices.out, "Output directory")->required();

  MultichannelArgs mc;
  auto* c_mc = app.add_subcommand("multichannel", "Build k-channel MRI inputs with CT targets");
  c_mc->add_option("--mri", mc.mri, "MRI NIfTI")->required();
  c_mc->add_option("--ct", mc.ct, "CT NIfTI")->required();
  c_mc->add_option("--out", mc.out, "Output directory")->required();
  c_mc->add_option("-k,--channels", mc.k, "Odd channel count");
  c_mc->add_flag("--normalize", mc.normalize, "Preprocess both volumes first");

  StackArgs stack;
  auto* c_stack = app.add_subcommand("stack", "Restack slices onto a template geometry");
  c_stack->add_option("--index", stack.index, "Slice index.csv")->required();
  c_stack->add_option("--template", stack.templ, "NIfTI supplying the geometry")->required();
  c_stack->add_option("--out", stack.out, "Output NIfTI")->required();

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Evaluate models from a run config");
  c_eval->add_option("--config", eval.config, "Run config file")->required();
  c_eval->add_option("--model", eval.models, "Restrict to these models");
  c_eval->add_option("--seed", eval.seed, "Override the config seed");
  c_eval->add_option("--scale", eval.scale, "Metric scale")
      ->check(CLI::IsMember({"normalized", "hu"}));
  c_eval->add_option("--jobs", eval.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_eval->add_option("--out-dir", eval.out_dir, "Override the output directory");

  SegEvalArgs seg;
  auto* c_seg = app.add_subcommand("seg-eval", "Mean per-label IoU of two label masks");
  c_seg->add_option("--gt", seg.gt, "Ground-truth mask NIfTI")->required();
  c_seg->add_option("--pred", seg.pred, "Predicted mask NIfTI")->required();
  c_seg->add_option("--gt-labels", seg.gt_labels, "Ground-truth label map");
  c_seg->add_option("--pred-labels", seg.pred_labels, "Predicted label map");
  c_seg->add_option("--mode", seg.mode, "3d (whole volume) or 2d (per slice)")
      ->check(CLI::IsMember({"2d", "3d"}));
  c_seg->add_option("--out", seg.out, "Output JSON (default stdout)");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Render report.json as csv, json or markdown");
  c_rep->add_option("--in", rep.in, "report.json from eval")->required();
  c_rep->add_option("--format", rep.format, "csv, json or markdown")
      ->check(CLI::IsMember({"csv", "json", "markdown", "md"}));
  c_rep->add_option("--out", rep.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    return 2;
  }

  try {
    if (c_ingest->parsed()) RunIngest(ingest);
    if (c_pre->parsed()) RunPreprocess(pre);
    if (c_split->parsed()) RunSplit(split);
    if (c_slices->parsed()) RunSlices(slices);
    if (c_mc->parsed()) RunMultichannel(mc);
    if (c_stack->parsed()) RunStack(stack);
    if (c_eval->parsed()) RunEval(eval);
    if (c_seg->parsed()) RunSegEval(seg);
    if (c_rep->parsed()) RunReport(rep);
  } catch (const Error& e) {
    PrintError(ErrorCodeName(e.code()), e.what());
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    PrintError("io", e.what());
    return 1;
  } catch (const std::exception& e) {
    PrintError("internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace sctk

int main(int argc, char** argv) { return sctk::Main(argc, argv); }
