// Batch front end for the Fiedler-vector estimation pipeline: synthetic data
// generation, embedding, penalty selection, cluster enumeration, image
// segmentation, Monte-Carlo benchmarking, and oracle verification.

#include "rrlpi/rrlpi.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct GlobalOptions {
    std::uint64_t seed{0};
    fs::path out_dir{"."};
    std::string log_level{"info"};
};

bool verbose(const GlobalOptions& g) { return g.log_level != "quiet"; }

void write_out(const GlobalOptions& g, const std::string& name, const std::string& content) {
    fs::create_directories(g.out_dir);
    rrlpi::atomic_write(g.out_dir / name, content);
}

const std::map<std::string, rrlpi::EmbeddingKind> kMethodNames = {
    {"le", rrlpi::EmbeddingKind::LE},
    {"lpi", rrlpi::EmbeddingKind::LPI},
    {"rlpi", rrlpi::EmbeddingKind::RLPI},
    {"rrlpi", rrlpi::EmbeddingKind::RRLPI},
};

rrlpi::EmbeddingVector run_embed(rrlpi::EmbeddingKind method, bool auto_gamma, double gamma,
                                 const rrlpi::DataMatrix& X, const rrlpi::AffinityGraph& G,
                                 const rrlpi::GammaSearchConfig& config, double* gamma_hat) {
    if (method == rrlpi::EmbeddingKind::RRLPI && auto_gamma) {
        const rrlpi::AutoGammaResult res = rrlpi::estimate_fiedler_rrlpi(X, G, config);
        if (gamma_hat) *gamma_hat = res.gamma_hat;
        return res.embedding;
    }
    if (gamma_hat) *gamma_hat = gamma;
    return rrlpi::estimate(method, X, G, gamma, config.huber_c).embedding;
}

std::string rows_to_csv(const std::vector<rrlpi::OracleRow>& rows) {
    std::string csv = "name,residual,tol,pass\n";
    for (const auto& r : rows) {
        csv += r.name + "," + rrlpi::format_double(r.residual) + "," +
               rrlpi::format_double(r.tol) + "," + (r.pass ? "1" : "0") + "\n";
    }
    return csv;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fiedler-vector estimation toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--log-level", g.log_level, "quiet|info|debug")->capture_default_str();
    app.set_config("--config", "", "TOML config mirroring the flags");

    rrlpi::GammaSearchConfig search;
    app.add_option("--gamma-min", search.gamma_min)->capture_default_str();
    app.add_option("--gamma-max", search.gamma_max)->capture_default_str();
    app.add_option("--gamma-grid", search.n_candidates, "candidate count")->capture_default_str();
    app.add_option("--k-max", search.k_max)->capture_default_str();
    app.add_option("--delta-scale", search.delta_scale)->capture_default_str();
    app.add_option("--huber-c", search.huber_c)->capture_default_str();

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "emit a synthetic dataset as CSV");
    rrlpi::Index per_cluster = 100;
    rrlpi::Index o1_count = 0, o2_count = 0;
    double o1_theta = 5.0;
    std::uint64_t run_index = 0;
    synth->add_option("--per-cluster", per_cluster)->capture_default_str();
    synth->add_option("--outlier1-count", o1_count)->capture_default_str();
    synth->add_option("--outlier1-theta", o1_theta)->capture_default_str();
    synth->add_option("--outlier2-count", o2_count)->capture_default_str();
    synth->add_option("--run", run_index, "Monte-Carlo run index")->capture_default_str();

    // ---- embed ----
    auto* embed = app.add_subcommand("embed", "CSV in, embedding CSV + SVG out");
    fs::path embed_input;
    rrlpi::EmbeddingKind embed_method = rrlpi::EmbeddingKind::RRLPI;
    double embed_gamma = 1e-8;
    bool embed_auto = false;
    embed->add_option("--input", embed_input, "dataset CSV, one sample per row")->required();
    embed->add_option("--method", embed_method, "le|lpi|rlpi|rrlpi")
        ->transform(CLI::CheckedTransformer(kMethodNames, CLI::ignore_case));
    embed->add_option("--gamma", embed_gamma)->capture_default_str();
    embed->add_flag("--auto-gamma", embed_auto, "penalty selection instead of fixed gamma");

    // ---- select-gamma ----
    auto* selg = app.add_subcommand("select-gamma", "emit candidate diagnostics JSON");
    fs::path selg_input;
    selg->add_option("--input", selg_input, "dataset CSV")->required();

    // ---- enumerate ----
    auto* enum_cmd = app.add_subcommand("enumerate", "cluster-count enumeration by modularity");
    fs::path enum_input;
    rrlpi::EmbeddingKind enum_method = rrlpi::EmbeddingKind::RRLPI;
    int enum_kmin = 1, enum_kmax = 10;
    enum_cmd->add_option("--input", enum_input, "dataset CSV")->required();
    enum_cmd->add_option("--method", enum_method, "le|lpi|rlpi|rrlpi")
        ->transform(CLI::CheckedTransformer(kMethodNames, CLI::ignore_case));
    enum_cmd->add_option("--k-min", enum_kmin)->capture_default_str();
    enum_cmd->add_option("--k-range-max", enum_kmax)->capture_default_str();

    // ---- segment ----
    auto* seg = app.add_subcommand("segment", "image in, label PNG + metrics JSON out");
    fs::path seg_input, seg_gt;
    int seg_k = 2;
    double seg_noise = 0.0;
    rrlpi::Index seg_target = 15000;
    rrlpi::EmbeddingKind seg_method = rrlpi::EmbeddingKind::RRLPI;
    seg->add_option("--input", seg_input, "PNG or PPM image")->required();
    seg->add_option("--k", seg_k, "number of segments")->capture_default_str();
    seg->add_option("--noise-var", seg_noise, "multiplicative noise variance")->capture_default_str();
    seg->add_option("--method", seg_method, "le|lpi|rlpi|rrlpi")
        ->transform(CLI::CheckedTransformer(kMethodNames, CLI::ignore_case));
    seg->add_option("--target-n", seg_target, "downsample target pixel count")->capture_default_str();
    seg->add_option("--ground-truth", seg_gt, "label PNG, one color per segment");

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "Monte-Carlo accuracy sweep");
    rrlpi::Index bench_runs = 20;
    rrlpi::Index bench_per_cluster = 100;
    rrlpi::Index bench_outliers = 10;
    std::vector<double> bench_thetas = {5, 6, 7, 8, 9, 10};
    std::vector<std::string> bench_methods = {"le", "rrlpi"};
    bench->add_option("--runs", bench_runs)->capture_default_str();
    bench->add_option("--per-cluster", bench_per_cluster)->capture_default_str();
    bench->add_option("--outliers", bench_outliers, "replacement outliers per dataset")
        ->capture_default_str();
    bench->add_option("--theta", bench_thetas, "outlier scale sweep")->capture_default_str();
    bench->add_option("--methods", bench_methods)->capture_default_str();

    // ---- verify-theory ----
    auto* verify = app.add_subcommand("verify-theory", "closed-form oracle table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (synth->parsed()) {
            rrlpi::SyntheticSpec spec = rrlpi::default_synthetic_spec(per_cluster);
            spec.seed = g.seed;
            spec.outlier1 = {o1_count, o1_theta};
            spec.outlier2.count = o2_count;
            const rrlpi::SyntheticData data = rrlpi::generate(spec, run_index);
            write_out(g, "synth_data.csv", rrlpi::matrix_to_csv(data.X.values));
            std::string labels = "label,outlier\n";
            for (size_t i = 0; i < data.labels.labels.size(); ++i)
                labels += std::to_string(data.labels.labels[i]) + "," +
                          (data.outlier_mask[i] ? "1" : "0") + "\n";
            write_out(g, "synth_labels.csv", labels);
            if (verbose(g))
                std::cout << "wrote " << data.X.cols() << " samples to "
                          << (g.out_dir / "synth_data.csv").string() << "\n";
        } else if (embed->parsed()) {
            const rrlpi::DataMatrix X = rrlpi::read_csv_matrix(embed_input);
            const rrlpi::AffinityGraph G = rrlpi::cosine_affinity(X);
            double gamma_hat = 0.0;
            const rrlpi::EmbeddingVector emb =
                run_embed(embed_method, embed_auto, embed_gamma, X, G, search, &gamma_hat);
            write_out(g, "embedding.csv", rrlpi::vector_to_csv(emb.y, "value"));
            write_out(g, "embedding.svg", rrlpi::svg_scatter(emb.y));
            if (verbose(g))
                std::cout << "embedding written (n=" << emb.y.size() << ", gamma=" << gamma_hat
                          << ", degenerate=" << emb.degenerate_spectrum << ")\n";
        } else if (selg->parsed()) {
            const rrlpi::DataMatrix X = rrlpi::read_csv_matrix(selg_input);
            const rrlpi::AffinityGraph G = rrlpi::cosine_affinity(X);
            const rrlpi::AutoGammaResult res = rrlpi::estimate_fiedler_rrlpi(X, G, search);
            ordered_json j;
            j["gamma_hat"] = res.gamma_hat;
            j["candidates"] = ordered_json::array();
            for (const auto& c : res.candidates) {
                j["candidates"].push_back({{"gamma", c.gamma},
                                           {"n_discarded", c.n_discarded},
                                           {"separated", c.separated},
                                           {"sets_valid", c.sets_valid},
                                           {"gap", c.gap}});
            }
            write_out(g, "gamma_diagnostics.json", j.dump(2) + "\n");
            if (verbose(g)) std::cout << "gamma_hat=" << res.gamma_hat << "\n";
        } else if (enum_cmd->parsed()) {
            const rrlpi::DataMatrix X = rrlpi::read_csv_matrix(enum_input);
            const rrlpi::AffinityGraph G = rrlpi::cosine_affinity(X);
            double gamma_hat = 0.0;
            const rrlpi::EmbeddingVector emb =
                run_embed(enum_method, true, search.gamma_min, X, G, search, &gamma_hat);
            const rrlpi::EnumerationResult res =
                rrlpi::enumerate_clusters(G, emb.y, enum_kmin, enum_kmax);
            std::string csv = "K,Q\n";
            for (const auto& e : res.table)
                csv += std::to_string(e.K) + "," + rrlpi::format_double(e.Q) + "\n";
            write_out(g, "enumeration.csv", csv);
            ordered_json j;
            j["k_hat"] = res.k_hat;
            write_out(g, "enumeration.json", j.dump(2) + "\n");
            if (verbose(g)) std::cout << "k_hat=" << res.k_hat << "\n";
        } else if (seg->parsed()) {
            rrlpi::PixelGrid grid = rrlpi::load_image(seg_input);
            if (seg_noise > 0.0) grid = rrlpi::corrupt(grid, seg_noise, g.seed);
            rrlpi::LabelMap gt;
            const rrlpi::LabelMap* gt_ptr = nullptr;
            if (!seg_gt.empty()) {
                gt = rrlpi::labels_from_colors(rrlpi::load_image(seg_gt));
                gt_ptr = &gt;
            }
            const rrlpi::SegmentationResult res =
                rrlpi::segment(grid, seg_k, seg_method, search, seg_target, gt_ptr);
            fs::create_directories(g.out_dir);
            rrlpi::save_label_png(g.out_dir / "labels.png", res.labels);
            ordered_json j;
            j["k"] = seg_k;
            j["gamma_hat"] = res.gamma_hat;
            j["degenerate_spectrum"] = res.degenerate_spectrum;
            if (res.has_metrics) {
                j["f_score"] = res.metrics.f_score;
                j["jaccard"] = res.metrics.jaccard;
                j["accuracy"] = res.metrics.accuracy;
            }
            write_out(g, "segment_metrics.json", j.dump(2) + "\n");
            if (verbose(g)) std::cout << "segmentation written\n";
        } else if (bench->parsed()) {
            std::vector<rrlpi::SweepCell> cells;
            for (double theta : bench_thetas) {
                rrlpi::SweepCell cell;
                cell.name = "theta=" + rrlpi::format_double(theta);
                cell.spec = rrlpi::default_synthetic_spec(bench_per_cluster);
                cell.spec.outlier1 = {bench_outliers, theta};
                cells.push_back(cell);
            }
            std::vector<rrlpi::MethodSpec> methods;
            for (const auto& name : bench_methods) {
                const auto it = kMethodNames.find(name);
                if (it == kMethodNames.end())
                    throw rrlpi::DomainViolation("unknown method: " + name);
                methods.push_back({it->second, true, search.gamma_min});
            }
            const auto rows = rrlpi::monte_carlo(cells, methods, bench_runs, g.seed, search);
            std::string csv = "cell,method,mean,std,n_runs,n_failed\n";
            ordered_json j = ordered_json::array();
            for (const auto& r : rows) {
                csv += r.cell + "," + r.method + "," + rrlpi::format_double(r.mean) + "," +
                       rrlpi::format_double(r.stddev) + "," + std::to_string(r.n_runs) + "," +
                       std::to_string(r.n_failed) + "\n";
                j.push_back({{"cell", r.cell},
                             {"method", r.method},
                             {"mean", r.mean},
                             {"std", r.stddev},
                             {"n_runs", r.n_runs},
                             {"n_failed", r.n_failed}});
            }
            write_out(g, "bench.csv", csv);
            write_out(g, "bench.json", j.dump(2) + "\n");
            if (verbose(g)) std::cout << "bench rows: " << rows.size() << "\n";
        } else if (verify->parsed()) {
            const auto rows = rrlpi::verify_theory(g.seed ? g.seed : 42);
            write_out(g, "verify_theory.csv", rows_to_csv(rows));
            bool all_pass = true;
            for (const auto& r : rows) {
                if (verbose(g))
                    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name
                              << " residual=" << r.residual << " tol=" << r.tol << "\n";
                all_pass = all_pass && r.pass;
            }
            if (!all_pass) return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
