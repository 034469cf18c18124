// Times the serial reference kernels against their OpenMP versions on a
// synthetic workload and prints a small table. The outputs of the two
// paths are bit-identical (asserted in tests/); this tool only measures.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <omp.h>

#include "evident/batch.hpp"
#include "evident/classifier.hpp"
#include "evident/dataset.hpp"
#include "evident/rng.hpp"

namespace {

evident::LoadedDataset make_workload(std::size_t rows, std::size_t views,
                                     std::size_t dim, std::size_t classes,
                                     evident::Rng& rng) {
  evident::LoadedDataset data;
  data.manifest.class_count = classes;
  data.labels.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    data.labels[r] = static_cast<int>(rng.below(classes));
    data.manifest.split.test.push_back(r);
  }
  for (std::size_t v = 0; v < views; ++v) {
    evident::Matrix m(rows, dim);
    for (double& x : m.data) x = rng.gaussian(0.0, 2.0);
    data.views.push_back(std::move(m));
    data.manifest.views.push_back(evident::ViewDescriptor{"", dim});
  }
  return data;
}

template <typename F>
double time_best_of(int repeats, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const double start = omp_get_wtime();
    fn();
    const double elapsed = omp_get_wtime() - start;
    if (elapsed < best) best = elapsed;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t rows = 20000;
  int repeats = 5;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--rows" && i + 1 < argc) {
      rows = static_cast<std::size_t>(std::strtoull(argv[++i], nullptr, 10));
    } else if (arg == "--repeats" && i + 1 < argc) {
      repeats = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--rows N] [--repeats N]\n", argv[0]);
      return 1;
    }
  }

  const std::size_t views = 3, dim = 16, hidden = 32, classes = 4;
  evident::Rng rng(42);
  const evident::LoadedDataset data = make_workload(rows, views, dim, classes, rng);

  evident::MultiViewModel model;
  model.class_count = classes;
  model.head = evident::HeadKind::kEvidential;
  model.decision = evident::DecisionRule::kIder;
  for (std::size_t v = 0; v < views; ++v) {
    model.views.push_back(evident::ViewModel::init(dim, hidden, classes, rng));
    model.optimizer.emplace_back();
  }

  std::vector<std::size_t> all_rows(rows);
  for (std::size_t r = 0; r < rows; ++r) all_rows[r] = r;

  std::printf("threads: %d, rows: %zu, views: %zu, repeats (best of): %d\n\n",
              omp_get_max_threads(), rows, views, repeats);
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]",
              "speedup");

  {
    const double serial = time_best_of(repeats, [&] {
      evident::predict_rows_serial(model, data, all_rows);
    });
    const double parallel = time_best_of(repeats, [&] {
      evident::predict_rows_parallel(model, data, all_rows);
    });
    std::printf("%-28s %12.4f %12.4f %8.2fx\n", "predict (fuse all views)",
                serial, parallel, serial / parallel);
  }
  {
    const double serial = time_best_of(repeats, [&] {
      evident::forward_evidence_rows_serial(model.views[0], data.views[0]);
    });
    const double parallel = time_best_of(repeats, [&] {
      evident::forward_evidence_rows_parallel(model.views[0], data.views[0]);
    });
    std::printf("%-28s %12.4f %12.4f %8.2fx\n", "forward evidence (one view)",
                serial, parallel, serial / parallel);
  }
  {
    const double serial = time_best_of(repeats, [&] {
      evident::mean_total_loss_serial(model, data, all_rows, 1.0);
    });
    const double parallel = time_best_of(repeats, [&] {
      evident::mean_total_loss_parallel(model, data, all_rows, 1.0);
    });
    std::printf("%-28s %12.4f %12.4f %8.2fx\n", "mean evidential loss", serial,
                parallel, serial / parallel);
  }
  return 0;
}
