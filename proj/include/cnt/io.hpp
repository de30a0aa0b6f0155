#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cnt/analysis.hpp"
#include "cnt/cycles.hpp"
#include "cnt/maps.hpp"
#include "cnt/odeint.hpp"
#include "cnt/params.hpp"

namespace cnt {

using json = nlohmann::json;

json to_json(const ModelParams& p);
ModelParams params_from_json(const json& j);
json to_json(const IntegratorConfig& c);
json to_json(const SectionSpec& s);
json to_json(const FixedPointRecord& rec);

// Minimal CSV writer with fixed 9-significant-digit formatting so reruns
// are byte-identical.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);
    void raw(const std::string& line);

private:
    std::string path_;
    std::string buf_;
    bool done_ = false;

public:
    ~CsvWriter();
};

void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

LimitCycle read_cycle_csv(const std::string& path, double period);

} // namespace cnt
