#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "promptcast/dataset.hpp"
#include "promptcast/decoding.hpp"
#include "promptcast/forecast.hpp"
#include "promptcast/prompting.hpp"
#include "support/fixtures.hpp"

using namespace promptcast;

namespace {

Instance example_instance() { return testsupport::ct_example().instance; }

ObjectSeries long_series(int days) {
    ObjectSeries s;
    s.object_index = 1;
    s.start_date = Date(2017, 1, 1);
    s.values.resize(static_cast<std::size_t>(days));
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> value(-44.0, 104.0);
    for (auto& v : s.values) v = value(rng);
    return s;
}

void BM_render_input(benchmark::State& state) {
    const auto inst = example_instance();
    const auto tpl = builtin_template("ct");
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_input(inst, tpl));
    }
}
BENCHMARK(BM_render_input);

void BM_render_output(benchmark::State& state) {
    const auto inst = example_instance();
    const auto tpl = builtin_template("ct");
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_output(inst, tpl));
    }
}
BENCHMARK(BM_render_output);

void BM_parse_output_strict(benchmark::State& state) {
    const auto tpl = builtin_template("ct");
    const std::string text = "The temperature will be -12 degree.";
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_output(text, tpl, DecodeMode::strict));
    }
}
BENCHMARK(BM_parse_output_strict);

void BM_parse_output_lenient(benchmark::State& state) {
    const auto tpl = builtin_template("ct");
    const std::string text = "the forecast, all things considered, will be - 12 or so";
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_output(text, tpl, DecodeMode::lenient));
    }
}
BENCHMARK(BM_parse_output_lenient);

void BM_make_instances(benchmark::State& state) {
    const auto series = long_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(make_instances(series, 15));
    }
    state.SetItemsProcessed(state.iterations() * (state.range(0) - 15));
}
BENCHMARK(BM_make_instances)->Arg(365)->Arg(1216);

void BM_format_date(benchmark::State& state) {
    const Date d(2019, 8, 31);
    for (auto _ : state) {
        benchmark::DoNotOptimize(format_date(d));
    }
}
BENCHMARK(BM_format_date);

void BM_predict_ha(benchmark::State& state) {
    const auto inst = example_instance();
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict_ha(inst));
    }
}
BENCHMARK(BM_predict_ha);

}  // namespace

BENCHMARK_MAIN();
