#pragma once

// JSON/CSV serialization for report types and the concept-class file format.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "redlearn/classes.hpp"
#include "redlearn/reductions.hpp"
#include "redlearn/representations.hpp"
#include "redlearn/sco.hpp"
#include "redlearn/topology.hpp"

namespace redlearn {

using Json = nlohmann::ordered_json;

// 17 significant digits: round-trips every double.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline Json vec_to_json(const Vec& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

// --------------------------------------------------------------------------
// Concept class files: {points: [[real]], table: [["+1"|"-1"|"*"]], names}

inline Json class_to_json(const FiniteConceptClass& cls) {
    Json j;
    Json points = Json::array();
    for (const auto& p : cls.points()) points.push_back(vec_to_json(p));
    j["points"] = std::move(points);
    Json table = Json::array();
    for (const auto& row : cls.table()) {
        Json r = Json::array();
        for (TableEntry e : row) r.push_back(e == kStar ? "*" : (e > 0 ? "+1" : "-1"));
        table.push_back(std::move(r));
    }
    j["table"] = std::move(table);
    Json names = Json::array();
    for (const auto& n : cls.names()) names.push_back(n);
    j["names"] = std::move(names);
    return j;
}

inline FiniteConceptClass class_from_json(const Json& j) {
    std::vector<Vec> points;
    for (const auto& p : j.at("points")) points.push_back(p.get<Vec>());
    std::vector<std::vector<TableEntry>> table;
    for (const auto& row : j.at("table")) {
        std::vector<TableEntry> r;
        for (const auto& e : row) {
            const std::string s = e.get<std::string>();
            if (s == "+1") r.push_back(+1);
            else if (s == "-1") r.push_back(-1);
            else if (s == "*") r.push_back(kStar);
            else throw std::invalid_argument("class_from_json: bad table entry '" + s + "'");
        }
        table.push_back(std::move(r));
    }
    std::vector<std::string> names;
    if (j.contains("names")) {
        for (const auto& n : j.at("names")) names.push_back(n.get<std::string>());
    }
    return FiniteConceptClass(std::move(points), std::move(table), std::move(names));
}

// --------------------------------------------------------------------------
// Reports

inline Json solver_report_to_json(const SolverReport& rep) {
    Json j;
    j["point"] = vec_to_json(rep.point);
    j["achieved_loss"] = rep.achieved_loss;
    j["opt_estimate"] = rep.opt_estimate;
    j["tolerance"] = rep.tolerance;
    j["iterations"] = rep.iterations;
    j["certified"] = rep.certified;
    return j;
}

inline Json verification_report_to_json(const VerificationReport& rep) {
    Json j;
    j["reduction"] = rep.reduction_name;
    j["alpha"] = rep.alpha;
    j["beta"] = rep.beta;
    j["slack"] = rep.slack;
    j["exact_claimed"] = rep.exact_claimed;
    Json rows = Json::array();
    for (const auto& r : rep.records) {
        Json row;
        row["id"] = r.dist_id;
        row["opt_target"] = r.opt_target;
        row["achieved"] = r.achieved;
        row["pulled_back_01"] = r.pulled_back_01;
        row["bound"] = r.bound;
        row["probes"] = r.probes;
        row["pass"] = r.pass;
        row["inconclusive"] = r.inconclusive;
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(std::move(row));
    }
    j["records"] = std::move(rows);
    j["aggregate_pass"] = rep.aggregate_pass;
    return j;
}

inline std::string verification_report_to_csv(const VerificationReport& rep) {
    std::string s = "id,opt_target,achieved,pulled_back_01,bound,pass\n";
    for (const auto& r : rep.records) {
        s += r.dist_id + "," + format_double(r.opt_target) + "," + format_double(r.achieved) +
             "," + format_double(r.pulled_back_01) + "," + format_double(r.bound) + "," +
             (r.pass ? "1" : "0") + "\n";
    }
    return s;
}

inline Json sign_flip_report_to_json(const SignFlipReport& rep) {
    Json j;
    j["n"] = rep.n;
    j["d"] = rep.d;
    j["gamma"] = rep.gamma;
    j["trials"] = rep.trials;
    j["flips"] = rep.flips;
    j["empirical_rate"] = rep.empirical_rate;
    j["bound"] = rep.bound;
    j["seed"] = rep.seed;
    return j;
}

inline std::string sign_flip_csv_header() {
    return "d,gamma,trials,empirical_rate,bound,seed\n";
}

inline std::string sign_flip_report_to_csv_row(const SignFlipReport& rep) {
    return std::to_string(rep.d) + "," + format_double(rep.gamma) + "," +
           std::to_string(rep.trials) + "," + format_double(rep.empirical_rate) + "," +
           format_double(rep.bound) + "," + std::to_string(rep.seed) + "\n";
}

inline Json helly_report_to_json(const HellyReport& rep) {
    Json j;
    j["d"] = rep.d;
    j["alpha"] = rep.alpha;
    j["exact_on_samples"] = rep.exact_on_samples;
    Json samples = Json::array();
    for (const auto& s : rep.samples) {
        Json e;
        e["witnessed"] = s.witnessed;
        if (s.witnessed) e["witness"] = vec_to_json(s.witness);
        Json fails = Json::array();
        for (const auto& sub : s.failing_subsets) {
            Json idx = Json::array();
            for (std::size_t i : sub) idx.push_back(i);
            fails.push_back(std::move(idx));
        }
        e["failing_subsets"] = std::move(fails);
        samples.push_back(std::move(e));
    }
    j["samples"] = std::move(samples);
    return j;
}

inline Json witness_to_json(const SignRankWitness& wit) {
    Json j;
    j["dim"] = wit.dim;
    j["verified"] = wit.verified;
    Json w = Json::array();
    for (const auto& v : wit.concept_vectors) w.push_back(vec_to_json(v));
    j["concept_vectors"] = std::move(w);
    Json phi = Json::array();
    for (const auto& v : wit.point_vectors) phi.push_back(vec_to_json(v));
    j["point_vectors"] = std::move(phi);
    return j;
}

inline Json majority3_report_to_json(const Majority3Report& rep) {
    Json j;
    Json rows = Json::array();
    for (const auto& r : rep.records) {
        Json row;
        row["id"] = r.dist_id;
        row["losses"] = Json::array({r.losses[0], r.losses[1], r.losses[2]});
        row["min_loss"] = r.min_loss;
        row["winner"] = r.winner;
        row["pass"] = r.pass;
        rows.push_back(std::move(row));
    }
    j["records"] = std::move(rows);
    j["all_pass"] = rep.all_pass;
    return j;
}

// Writes via a temp file in the same directory, then renames.
inline void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
        out << content;
        if (!out) throw std::runtime_error("atomic_write: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace redlearn
