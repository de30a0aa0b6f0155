#include "cnt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cnt/errors.hpp"

namespace cnt {

json to_json(const ModelParams& p) {
    return json{{"phi1", p.phi1},   {"phi2", p.phi2},
                {"eps1", p.eps1},   {"eps2", p.eps2},
                {"k_f", p.k_f},     {"k_D", p.k_D},
                {"k_L1", p.k_L1},   {"k_L2", p.k_L2},
                {"alpha1", p.alpha1}, {"photoperiod_on", p.photoperiod_on},
                {"fingerprint", params_fingerprint(p)}};
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.phi1 = j.at("phi1");
    p.phi2 = j.at("phi2");
    p.eps1 = j.at("eps1");
    p.eps2 = j.at("eps2");
    p.k_f = j.at("k_f");
    p.k_D = j.at("k_D");
    p.k_L1 = j.at("k_L1");
    p.k_L2 = j.at("k_L2");
    p.alpha1 = j.at("alpha1");
    p.photoperiod_on = j.at("photoperiod_on");
    p.validate();
    return p;
}

json to_json(const IntegratorConfig& c) {
    return json{{"rel_tol", c.rel_tol},
                {"abs_tol", c.abs_tol},
                {"max_step", c.max_step},
                {"event_tol", c.event_tol}};
}

json to_json(const SectionSpec& s) {
    return json{{"coordinate", s.coordinate == SectionSpec::Coord::P ? "P" : "M"},
                {"level", s.level},
                {"center", s.center},
                {"delta", s.delta},
                {"direction", s.direction}};
}

json to_json(const FixedPointRecord& rec) {
    const char* stability = rec.stability == Stability::sink     ? "sink"
                            : rec.stability == Stability::saddle ? "saddle"
                                                                 : "source";
    json eig = json::array();
    json vecs = json::array();
    for (int k = 0; k < 2; ++k) {
        eig.push_back({{"re", rec.eigenvalues[k].real()}, {"im", rec.eigenvalues[k].imag()}});
        vecs.push_back({{{"re", rec.eigenvectors[k][0].real()},
                         {"im", rec.eigenvectors[k][0].imag()}},
                        {{"re", rec.eigenvectors[k][1].real()},
                         {"im", rec.eigenvectors[k][1].imag()}}});
    }
    return json{{"label", std::string(1, rec.label)},
                {"x", rec.location.x},
                {"y", rec.location.y},
                {"jacobian", {rec.jacobian[0][0], rec.jacobian[0][1], rec.jacobian[1][0],
                              rec.jacobian[1][1]}},
                {"eigenvalues", eig},
                {"eigenvectors", vecs},
                {"stability", stability},
                {"residual", rec.residual},
                {"converged", rec.converged}};
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) { buf_.reserve(1 << 16); }

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cols[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& vals) {
    char num[48];
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) buf_ += ',';
        std::snprintf(num, sizeof num, "%.9g", vals[i]);
        buf_ += num;
    }
    buf_ += '\n';
}

void CsvWriter::raw(const std::string& line) {
    buf_ += line;
    buf_ += '\n';
}

CsvWriter::~CsvWriter() {
    if (done_) return;
    std::ofstream out(path_, std::ios::binary);
    out << buf_;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    out << content;
}

void write_json(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open " + path);
    json j;
    in >> j;
    return j;
}

LimitCycle read_cycle_csv(const std::string& path, double period) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open " + path);
    LimitCycle c;
    c.period = period;
    std::string line;
    std::getline(in, line); // header
    double t_prev = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t = 0, P = 0, M = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &P, &M) != 3)
            fail(ErrorCode::io, path + ": bad row '" + line + "'");
        if (first) {
            first = false;
        } else if (c.samples.size() == 1) {
            c.dt_sample = t - t_prev;
        }
        c.samples.push_back({P, M});
        t_prev = t;
    }
    if (c.samples.size() < 2) fail(ErrorCode::io, path + ": too few samples");
    return c;
}

} // namespace cnt
