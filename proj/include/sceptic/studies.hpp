#pragma once

#include <string>
#include <vector>

namespace sceptic {

struct StudyRecord {
    std::string study_id;
    // Raw inputs. Correlation mode fills (r, n); effect mode loads
    // (theta, se) directly and leaves r and n at zero.
    bool from_theta_se = false;
    double r_o = 0.0;
    long n_o = 0;
    double r_r = 0.0;
    long n_r = 0;
    // Derived, always recomputed from the inputs.
    double theta_o = 0.0;
    double se_o = 0.0;
    double theta_r = 0.0;
    double se_r = 0.0;
    double z_o = 0.0;
    double z_r = 0.0;
    double p_o = 0.0;
    double p_r = 0.0;
    double c = 0.0;
};

struct AnalysisRow {
    StudyRecord record;
    double power_2tr = 0.0;
    double c_star = 0.0;
    bool c_star_feasible = false;
    double p_max = 0.0;
    double p_s_star = 0.0;
    bool success_2tr = false;
    bool success_sceptical = false;
};

// Reads a study CSV. Two headers are accepted:
//   study,r_o,n_o,r_r,n_r           correlations with Fisher's z-transform
//   study,theta_o,se_o,theta_r,se_r effect estimates with standard errors
// Malformed rows raise errors naming line and column.
std::vector<StudyRecord> load_studies(const std::string& path);

// Writes records back in the format they were loaded from.
std::string serialize_studies(const std::vector<StudyRecord>& records);

// Per-study method comparison: two-trials power at the actual c, the
// sceptical relative sample size reaching that power, both p-values and
// success verdicts. Per-row infeasibility is flagged, never thrown.
std::vector<AnalysisRow> analyze_studies(const std::vector<StudyRecord>& records,
                                         double alpha, double boundary_tol = 1e-9);

enum class FigureId {
    F1_CDF,
    F2_PS_VS_C,
    F3_REGIONS,
    F4_POWER_RATIOS,
    F5_PROJECT_POWER,
    F6_COND_T1E,
};

struct FigureRow {
    double x = 0.0;
    std::string series;
    double y = 0.0;
};

// Deterministic plot data for the named figure.
std::vector<FigureRow> emit_figure_data(FigureId figure, double alpha = 0.025);

FigureId parse_figure_id(const std::string& name);

}  // namespace sceptic
