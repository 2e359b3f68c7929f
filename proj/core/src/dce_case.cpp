#include "seedgrow/dce_case.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace seedgrow {

namespace fs = std::filesystem;
using nlohmann::json;

void DceCase::validate() const {
  if (post.size() < 2) throw std::invalid_argument("case " + case_id + ": needs >= 2 postcontrast volumes");
  require_finite(pre, "case " + case_id + " pre");
  for (const auto& p : post) {
    if (!p.same_geometry(pre)) throw std::invalid_argument("case " + case_id + ": postcontrast geometry mismatch");
    require_finite(p, "case " + case_id + " post");
  }
  if (!breast_mask.same_geometry(pre))
    throw std::invalid_argument("case " + case_id + ": breast mask geometry mismatch");
  require_binary(breast_mask, "case " + case_id + " breast_mask");
  for (const auto* m : {&gt_vessel, &gt_benign}) {
    if (m->has_value()) {
      if (!(*m)->same_geometry(pre))
        throw std::invalid_argument("case " + case_id + ": ground-truth geometry mismatch");
      require_binary(**m, "case " + case_id + " ground truth");
    }
  }
  if (gt_tumor && !gt_tumor->same_geometry(pre))
    throw std::invalid_argument("case " + case_id + ": gt_tumor geometry mismatch");
}

void write_case(const DceCase& c, const std::string& dir) {
  c.validate();
  fs::create_directories(dir);
  const fs::path base(dir);

  write_volume(c.pre, (base / "pre").string());
  json files;
  files["pre"] = "pre";
  std::vector<std::string> post_names;
  for (std::size_t i = 0; i < c.post.size(); ++i) {
    std::string name = "post" + std::to_string(i);
    write_volume(c.post[i], (base / name).string());
    post_names.push_back(name);
  }
  files["post"] = post_names;
  write_volume(c.breast_mask, (base / "breast_mask").string());
  files["breast_mask"] = "breast_mask";
  if (c.gt_tumor) {
    write_volume(*c.gt_tumor, (base / "gt_tumor").string());
    files["gt_tumor"] = "gt_tumor";
  }
  if (c.gt_vessel) {
    write_volume(*c.gt_vessel, (base / "gt_vessel").string());
    files["gt_vessel"] = "gt_vessel";
  }
  if (c.gt_benign) {
    write_volume(*c.gt_benign, (base / "gt_benign").string());
    files["gt_benign"] = "gt_benign";
  }

  json manifest;
  manifest["case_id"] = c.case_id;
  manifest["shape"] = c.pre.shape();
  manifest["spacing_mm"] = c.pre.spacing_mm();
  manifest["n_post"] = c.post.size();
  manifest["files"] = files;
  if (!c.tumor_truth.empty()) {
    json tumors = json::array();
    for (const auto& t : c.tumor_truth) {
      tumors.push_back({{"id", t.id},
                        {"analytic_volume_mm3", t.analytic_volume_mm3},
                        {"center_mm", t.center_mm},
                        {"semi_axes_mm", t.semi_axes_mm},
                        {"washin", t.washin},
                        {"washout", t.washout}});
    }
    manifest["ground_truth"]["tumors"] = tumors;
  }
  if (c.nac_shrink_factor) manifest["nac"]["shrink_factor"] = *c.nac_shrink_factor;

  std::ofstream out(base / "case.json");
  if (!out) throw std::runtime_error("cannot write " + (base / "case.json").string());
  out << manifest.dump(2) << "\n";
}

DceCase read_case(const std::string& manifest_path) {
  fs::path mpath(manifest_path);
  if (fs::is_directory(mpath)) mpath /= "case.json";
  std::ifstream in(mpath);
  if (!in) throw std::runtime_error("cannot open case manifest " + mpath.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed case manifest " + mpath.string() + ": " + e.what());
  }
  const fs::path base = mpath.parent_path();
  const json& files = manifest.at("files");

  DceCase c;
  c.case_id = manifest.at("case_id").get<std::string>();
  c.pre = read_volume_f32((base / files.at("pre").get<std::string>()).string());
  for (const auto& name : files.at("post"))
    c.post.push_back(read_volume_f32((base / name.get<std::string>()).string()));
  c.breast_mask = read_volume_u8((base / files.at("breast_mask").get<std::string>()).string());
  if (files.contains("gt_tumor"))
    c.gt_tumor = read_volume_u8((base / files.at("gt_tumor").get<std::string>()).string());
  if (files.contains("gt_vessel"))
    c.gt_vessel = read_volume_u8((base / files.at("gt_vessel").get<std::string>()).string());
  if (files.contains("gt_benign"))
    c.gt_benign = read_volume_u8((base / files.at("gt_benign").get<std::string>()).string());
  if (manifest.contains("ground_truth") && manifest["ground_truth"].contains("tumors")) {
    for (const auto& t : manifest["ground_truth"]["tumors"]) {
      TumorTruth tt;
      tt.id = t.at("id").get<int>();
      tt.analytic_volume_mm3 = t.at("analytic_volume_mm3").get<double>();
      tt.center_mm = t.at("center_mm").get<std::array<double, 3>>();
      tt.semi_axes_mm = t.at("semi_axes_mm").get<std::array<double, 3>>();
      tt.washin = t.at("washin").get<double>();
      tt.washout = t.at("washout").get<double>();
      c.tumor_truth.push_back(tt);
    }
  }
  if (manifest.contains("nac") && manifest["nac"].contains("shrink_factor"))
    c.nac_shrink_factor = manifest["nac"]["shrink_factor"].get<double>();

  // gt_tumor may be multi-label; only the companion masks are binary.
  c.validate();
  return c;
}

}  // namespace seedgrow
