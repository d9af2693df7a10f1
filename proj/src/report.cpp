#include "qcast/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qcast/csv.hpp"
#include "qcast/errors.hpp"

namespace qcast {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string render_report_json(const CvReport& report) {
    ordered_json root;
    root["dataset"] = {
        {"observations", report.n},
        {"folds", report.k},
        {"train_size", report.m},
        {"test_start", report.test_periods.front().str()},
        {"test_end", report.test_periods.back().str()},
    };
    root["config_digest"] = report.config_digest;
    if (report.split_at) {
        root["split_at"] = report.split_at->str();
    }

    ordered_json models = ordered_json::array();
    for (const auto& model : report.models) {
        ordered_json entry;
        entry["name"] = model.name;
        entry["kind"] = model.kind;
        if (model.complete()) {
            entry["mae"] = *model.mae;
            entry["rmse"] = *model.rmse;
        } else {
            entry["mae"] = nullptr;
            entry["rmse"] = nullptr;
            std::size_t failed = 0;
            for (const auto& fold : model.folds) {
                if (!fold.valid) ++failed;
            }
            entry["failed_folds"] = failed;
        }
        models.push_back(std::move(entry));
    }
    root["models"] = std::move(models);
    return root.dump(2) + "\n";
}

std::string render_errors_csv(const CvReport& report) {
    std::ostringstream out;
    out << "period,actual";
    for (const auto& model : report.models) {
        out << ',' << model.name;
    }
    out << '\n';
    for (std::size_t j = 0; j < report.k; ++j) {
        out << report.test_periods[j].str() << ',' << format_double(report.actuals[j]);
        for (const auto& model : report.models) {
            out << ',';
            if (model.folds[j].valid) {
                out << format_double(model.folds[j].prediction);
            }
        }
        out << '\n';
    }
    return out.str();
}

/// Cumulative |error| paths over the fold range [first, last); only models
/// with every fold valid get a column.
std::string render_cumabs_csv(const CvReport& report, std::size_t first, std::size_t last) {
    std::vector<const ModelReport*> complete;
    for (const auto& model : report.models) {
        if (model.complete()) {
            complete.push_back(&model);
        }
    }
    std::ostringstream out;
    out << "period";
    for (const auto* model : complete) {
        out << ',' << model->name;
    }
    out << '\n';
    std::vector<double> running(complete.size(), 0.0);
    for (std::size_t j = first; j < last; ++j) {
        out << report.test_periods[j].str();
        for (std::size_t s = 0; s < complete.size(); ++s) {
            const FoldOutcome& fold = complete[s]->folds[j];
            running[s] += std::abs(fold.actual - fold.prediction);
            out << ',' << format_double(running[s]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const CvReport& report,
                                               const std::filesystem::path& directory) {
    if (report.models.empty() || report.k == 0) {
        throw std::invalid_argument("emit_report: empty report");
    }

    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw DataError("cannot create output directory '" + directory.string() +
                        "': " + ec.message());
    }

    // Render everything first, then write; clean up on any failure so a
    // broken run never leaves a partial output set behind.
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    files.emplace_back(directory / "report.json", render_report_json(report));
    files.emplace_back(directory / "errors_by_fold.csv", render_errors_csv(report));
    files.emplace_back(directory / "cumabs.csv", render_cumabs_csv(report, 0, report.k));
    if (report.split_at) {
        std::size_t split_index = report.k;
        for (std::size_t j = 0; j < report.k; ++j) {
            if (report.test_periods[j] >= *report.split_at) {
                split_index = j;
                break;
            }
        }
        files.emplace_back(directory / "cumabs_pre.csv",
                           render_cumabs_csv(report, 0, split_index));
        files.emplace_back(directory / "cumabs_post.csv",
                           render_cumabs_csv(report, split_index, report.k));
    }

    std::vector<std::filesystem::path> written;
    for (const auto& [path, content] : files) {
        std::ofstream out(path);
        if (!out || !(out << content) || !out.flush()) {
            for (const auto& done : written) {
                std::filesystem::remove(done, ec);
            }
            std::filesystem::remove(path, ec);
            throw DataError("cannot write '" + path.string() + "'");
        }
        written.push_back(path);
    }
    return written;
}

}  // namespace qcast
