// report.hpp -- result files: the learning-curve CSV, the comparison summary,
// and the run manifest. All output is deterministic (no timestamps), so a
// rerun with identical settings is byte-identical.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "morphlab/xfer.hpp"

namespace morphlab {

inline std::string format_accuracy(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Column order is fixed: experiment,condition,phase,seed,epoch,category,
/// split,accuracy. Per record: phase 1 then phase 2; per evaluation point:
/// categories in alphabetical order, train before test.
inline void write_curves_csv(const std::vector<RunRecord>& records,
                             std::ostream& os) {
  os << "experiment,condition,phase,seed,epoch,category,split,accuracy\n";
  for (const RunRecord& rec : records) {
    auto emit_phase = [&](const Curve& curve, int phase) {
      for (const EvalPoint& pt : curve) {
        auto emit_split = [&](const std::map<std::string, double>& accs,
                              const char* split) {
          for (const auto& [category, acc] : accs)
            os << rec.experiment << ',' << rec.condition << ',' << phase << ','
               << rec.seed << ',' << pt.epoch << ',' << category << ','
               << split << ',' << format_accuracy(acc) << '\n';
        };
        emit_split(pt.train, "train");
        emit_split(pt.test, "test");
      }
    };
    emit_phase(rec.phase1, 1);
    emit_phase(rec.phase2, 2);
  }
}

/// Three sections, each a small CSV table:
///   [means]       experiment,condition,epoch,mean,stderr
///   [sign_tests]  experiment,a,b,epoch,wins,losses,ties,p_one_sided
///   [orderings]   experiment,description,epoch,means_ordered,top_vs_bottom_p
inline void write_summary(const std::vector<ComparisonResult>& comparisons,
                          std::ostream& os) {
  os << "morphlab summary v1\n";
  os << "metric: phase-2 test accuracy of the newly added category\n\n";

  os << "[means]\nexperiment,condition,epoch,mean,stderr\n";
  for (const ComparisonResult& cr : comparisons)
    for (const ConditionStats& cs : cr.stats)
      for (std::size_t c = 0; c < cr.checkpoints.size(); ++c)
        os << cr.experiment << ',' << cs.condition << ',' << cr.checkpoints[c]
           << ',' << format_accuracy(cs.means[c]) << ','
           << format_accuracy(cs.stderrs[c]) << '\n';

  os << "\n[sign_tests]\nexperiment,a,b,epoch,wins,losses,ties,p_one_sided\n";
  for (const ComparisonResult& cr : comparisons)
    for (const PairResult& pr : cr.pairs)
      for (std::size_t c = 0; c < cr.checkpoints.size(); ++c)
        os << cr.experiment << ',' << pr.a << ',' << pr.b << ','
           << cr.checkpoints[c] << ',' << pr.tests[c].wins << ','
           << pr.tests[c].losses << ',' << pr.tests[c].ties << ','
           << format_accuracy(pr.tests[c].p) << '\n';

  os << "\n[orderings]\nexperiment,description,epoch,means_ordered,"
        "top_vs_bottom_p\n";
  for (const ComparisonResult& cr : comparisons)
    for (const OrderingVerdict& v : cr.verdicts)
      for (std::size_t c = 0; c < cr.checkpoints.size(); ++c)
        os << cr.experiment << ',' << v.description << ','
           << cr.checkpoints[c] << ',' << (v.means_ordered[c] ? "yes" : "no")
           << ',' << format_accuracy(v.top_vs_bottom[c].p) << '\n';
}

/// Everything needed to reproduce a run: settings, conditions, seeds.
inline void write_manifest(const RunSettings& s,
                           const std::vector<ConditionSpec>& conds,
                           const std::vector<std::uint64_t>& seeds,
                           const std::vector<int>& checkpoints,
                           std::ostream& os) {
  os << "morphlab run manifest v1\n";
  os << "learning_rate=" << s.net.learning_rate << '\n';
  os << "momentum=" << s.net.momentum << '\n';
  os << "init_range=" << s.net.init_range << '\n';
  os << "hidden_root=" << s.percept_sizes.root_hidden << '\n';
  os << "hidden_infl=" << s.percept_sizes.infl_hidden << '\n';
  os << "hidden_prod=" << s.production_hidden << '\n';
  os << "epochs1=" << s.epochs1 << '\n';
  os << "epochs2=" << s.epochs2 << '\n';
  os << "pretrain_epochs=" << s.pretrain_epochs << '\n';
  os << "phase1_stop_accuracy=" << s.phase1_stop_accuracy << '\n';
  os << "pretrain_stop_accuracy=" << s.pretrain_stop_accuracy << '\n';
  os << "eval_every=" << s.eval_every << '\n';
  os << "pretrain_eval_every=" << s.pretrain_eval_every << '\n';
  os << "checkpoints=";
  for (std::size_t i = 0; i < checkpoints.size(); ++i)
    os << (i ? "," : "") << checkpoints[i];
  os << '\n';
  os << "seeds=";
  for (std::size_t i = 0; i < seeds.size(); ++i)
    os << (i ? "," : "") << seeds[i];
  os << '\n';
  os << "conditions=\n";
  for (const ConditionSpec& c : conds)
    os << "  " << c.experiment << '/' << c.name << " ("
       << modality_name(c.modality) << ")\n";
}

}  // namespace morphlab
