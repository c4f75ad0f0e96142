#pragma once

// Shared fixtures: the three reference example instances with their exact
// rendered sentences, and synthetic raw-data generators.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "promptcast/dataset.hpp"
#include "promptcast/prompting.hpp"

namespace testsupport {

struct ExampleCase {
    promptcast::ScenarioTemplate tpl;
    promptcast::Instance instance;
    std::string input;   // context + single space + question
    std::string output;  // answer sentence
};

inline promptcast::Instance make_instance(int object_index, promptcast::Date window_start,
                                          std::vector<double> window, double target) {
    promptcast::Instance inst;
    inst.object_index = object_index;
    inst.window_start = window_start;
    inst.window = std::move(window);
    inst.target_date = window_start.plus_days(static_cast<int>(inst.window.size()));
    inst.target = target;
    return inst;
}

inline ExampleCase ct_example() {
    ExampleCase c;
    c.tpl = promptcast::builtin_template("ct");
    c.instance = make_instance(
        110, promptcast::Date(2019, 8, 16),
        {78, 81, 83, 84, 84, 82, 83, 78, 77, 77, 74, 77, 78, 73, 76}, 78);
    c.input =
        "From August 16, 2019, Friday to August 30, 2019, Friday, the average temperature of "
        "region 110 was 78, 81, 83, 84, 84, 82, 83, 78, 77, 77, 74, 77, 78, 73, 76 degree on "
        "each day. What is the temperature going to be on August 31, 2019, Saturday?";
    c.output = "The temperature will be 78 degree.";
    return c;
}

inline ExampleCase ecl_example() {
    ExampleCase c;
    c.tpl = promptcast::builtin_template("ecl");
    c.instance = make_instance(50, promptcast::Date(2014, 5, 16),
                               {8975, 9158, 8786, 8205, 7693, 7419, 7595, 7596, 7936, 7646, 7808,
                                7736, 7913, 8074, 8329},
                               8337);
    c.input =
        "From May 16, 2014, Friday to May 30, 2014, Friday, client 50 consumed 8975, 9158, "
        "8786, 8205, 7693, 7419, 7595, 7596, 7936, 7646, 7808, 7736, 7913, 8074, 8329 kWh of "
        "electricity on each day. What is the consumption going to be on May 31, 2014, "
        "Saturday?";
    c.output = "This client will consume 8337 kWh of electricity.";
    return c;
}

inline ExampleCase sg_example() {
    ExampleCase c;
    c.tpl = promptcast::builtin_template("sg");
    c.instance = make_instance(
        324, promptcast::Date(2021, 5, 23),
        {13, 17, 13, 20, 16, 16, 17, 17, 19, 20, 12, 12, 14, 12, 13}, 15);
    c.input =
        "From May 23, 2021, Sunday to June 06, 2021, Sunday, there were 13, 17, 13, 20, 16, "
        "16, 17, 17, 19, 20, 12, 12, 14, 12, 13 people visiting POI 324 on each day. How many "
        "people will visit POI 324 on June 07, 2021, Monday?";
    c.output = "There will be 15 visitors.";
    return c;
}

inline std::vector<ExampleCase> example_cases() {
    return {ct_example(), ecl_example(), sg_example()};
}

/// value_of(object 0-based, day 0-based) -> value
using ValueFn = std::function<double(int, int)>;

/// Writes a daily raw CSV (header: object,date,value) with `objects` complete
/// series covering [start, start + days - 1]. Object keys are obj_000, ...
inline void write_raw_csv(const std::filesystem::path& path, int objects, promptcast::Date start,
                          int days, const ValueFn& value_of) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "object,date,value\n";
    char key[16];
    for (int m = 0; m < objects; ++m) {
        std::snprintf(key, sizeof(key), "obj_%03d", m);
        for (int d = 0; d < days; ++d) {
            out << key << ',' << start.plus_days(d).iso() << ',' << value_of(m, d) << '\n';
        }
    }
}

/// Minimal experiment config JSON for synthetic scenarios that share one
/// raw-file layout. Extra top-level entries can be appended by the caller.
struct SyntheticScenario {
    std::string name;
    std::string raw_file;
    std::string collection_start;
    std::string collection_end;
    int object_count = 1;
    std::string split_json;  // e.g. R"("split":{"ratio":[7,1,2]})" or boundary dates
    std::string template_name = "ct";
};

inline std::string scenario_json(const SyntheticScenario& s) {
    std::string json = "{";
    json += "\"name\":\"" + s.name + "\",";
    json += "\"raw_path\":\"" + s.raw_file + "\",";
    json += "\"columns\":{\"object\":\"object\",\"timestamp\":\"date\",\"value\":\"value\"},";
    json += "\"collection_start\":\"" + s.collection_start + "\",";
    json += "\"collection_end\":\"" + s.collection_end + "\",";
    json += "\"object_count\":" + std::to_string(s.object_count) + ",";
    if (!s.split_json.empty()) json += s.split_json + ",";
    json += "\"template\":\"" + s.template_name + "\"";
    json += "}";
    return json;
}

}  // namespace testsupport
