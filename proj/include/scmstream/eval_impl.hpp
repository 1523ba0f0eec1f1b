#ifndef SCMSTREAM_EVAL_IMPL_HPP
#define SCMSTREAM_EVAL_IMPL_HPP

namespace scmstream {

template <typename StreamModel>
ChunkMetricsReport prequential_run(StreamModel& model, const Dataset& stream, std::size_t chunk) {
  if (stream.empty()) throw std::invalid_argument("prequential run on an empty stream");
  if (chunk < 1) throw std::invalid_argument("chunk size must be >= 1");

  ChunkMetricsReport report;
  report.chunk_size = chunk;
  report.instances = stream.size();

  ConfusionAccumulator pooled(stream.M);
  ConfusionAccumulator current(stream.M);
  std::size_t in_chunk = 0;
  std::size_t chunk_index = 0;
  double sum_fdr = 0.0, sum_fnr = 0.0, sum_mcc = 0.0;

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const LabeledInstance& inst = stream.instances[i];
    const int predicted = model.predict(inst.x);
    current.add(inst.label, predicted);
    pooled.add(inst.label, predicted);
    const auto events = model.observe(inst);
    if (events.trained) report.events.push_back({inst.t, 'T'});
    if (events.drift) report.events.push_back({inst.t, 'D'});
    if (++in_chunk == chunk) {
      ChunkMetrics metrics{chunk_index, macro_fdr(current), macro_fnr(current),
                           macro_mcc_loss(current)};
      sum_fdr += metrics.mafdr;
      sum_fnr += metrics.mafnr;
      sum_mcc += metrics.mamcc_loss;
      report.chunks.push_back(metrics);
      current.clear();
      in_chunk = 0;
      ++chunk_index;
    }
  }

  report.pooled_mafdr = macro_fdr(pooled);
  report.pooled_mafnr = macro_fnr(pooled);
  report.pooled_mamcc_loss = macro_mcc_loss(pooled);
  if (!report.chunks.empty()) {
    const double n = static_cast<double>(report.chunks.size());
    report.chunk_mean_mafdr = sum_fdr / n;
    report.chunk_mean_mafnr = sum_fnr / n;
    report.chunk_mean_mamcc_loss = sum_mcc / n;
  } else {
    report.chunk_mean_mafdr = report.pooled_mafdr;
    report.chunk_mean_mafnr = report.pooled_mafnr;
    report.chunk_mean_mamcc_loss = report.pooled_mamcc_loss;
  }
  return report;
}

}  // namespace scmstream

#endif
