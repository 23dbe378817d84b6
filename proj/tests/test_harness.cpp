#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "fkm/bicriteria.hpp"
#include "fkm/common.hpp"
#include "fkm/evaluate.hpp"
#include "fkm/fuzzy.hpp"
#include "fkm/generator.hpp"
#include "fkm/io.hpp"
#include "fkm/streaming.hpp"

using namespace fkm;

TEST_CASE("mixture generator") {
    MixtureSpec spec;
    spec.dim = 2;
    spec.components.push_back({{0.0, 0.0}, 1.0, 1});
    const WeightedDataset lone = generate_dataset(spec, 1);
    CHECK(lone.size() == 1);

    spec.components.clear();
    spec.components.push_back({{0.0, 0.0}, 0.5, 100});
    spec.components.push_back({{50.0, 50.0}, 0.5, 150});
    const WeightedDataset mix = generate_dataset(spec, 2);
    CHECK(mix.size() == 250);

    // Far-apart components: seeding with 2 clusters crushes the single-center
    // cost.
    const BicriteriaSolution a = bicriteria_kmeans(mix, 2, 0.1, 3);
    const double single =
        kmeans_cost(mix, MeansSolution(weighted_centroid(mix), 2));
    CHECK(a.cost < 0.01 * single);

    // Determinism.
    const WeightedDataset again = generate_dataset(spec, 2);
    CHECK(again.data() == mix.data());

    // Round-trip through JSON.
    const MixtureSpec parsed = mixture_from_json(mixture_to_json(spec));
    CHECK(parsed.dim == spec.dim);
    REQUIRE(parsed.components.size() == 2);
    CHECK(parsed.components[1].count == 150);
    CHECK(generate_dataset(parsed, 2).data() == mix.data());

    MixtureSpec bad;
    bad.dim = 0;
    CHECK_THROWS_AS(generate_dataset(bad, 1), std::invalid_argument);
}

TEST_CASE("shuffle keeps the multiset") {
    MixtureSpec spec;
    spec.dim = 1;
    spec.components.push_back({{0.0}, 1.0, 50});
    const WeightedDataset x = generate_dataset(spec, 4);
    const WeightedDataset shuffled = shuffle_dataset(x, 9);
    CHECK(shuffled.size() == x.size());
    std::vector<double> a(x.data()), b(shuffled.data());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(shuffled.data() != x.data());
}

TEST_CASE("point file round trip") {
    std::vector<double> data{0.25, -1.5, 3.0, 4.125};
    WeightedDataset x(data, 2);
    std::ostringstream out;
    write_points(out, x, {{"seed", "7"}});
    const std::string text = out.str();
    CHECK(text.find("# seed=7") != std::string::npos);
    CHECK(text.find("# weighted") == std::string::npos);

    std::istringstream in(text);
    std::map<std::string, std::string> header;
    const WeightedDataset back = read_points(in, &header);
    CHECK(back.data() == x.data());
    CHECK(back.unit_weights());
    CHECK(header.at("seed") == "7");
}

TEST_CASE("weighted point file round trip") {
    WeightedDataset x(std::vector<double>{1.0, 2.0, 3.0, 4.0}, 2, {3, 9});
    std::ostringstream out;
    write_points(out, x);
    CHECK(out.str().rfind("# weighted\n", 0) == 0);

    std::istringstream in(out.str());
    const WeightedDataset back = read_points(in);
    CHECK(back.weights() == x.weights());
    CHECK(back.data() == x.data());
}

TEST_CASE("point file tolerates comments and blank lines") {
    const std::string text =
        "# a comment\n"
        "\n"
        "1.5,2.5\n"
        "# another\n"
        "3.5,4.5\n";
    std::istringstream in(text);
    const WeightedDataset x = read_points(in);
    CHECK(x.size() == 2);
    CHECK(x.dim() == 2);

    std::istringstream bad("1.5,oops\n");
    CHECK_THROWS(read_points(bad));
    std::istringstream ragged("1.5,2.5\n1.5\n");
    CHECK_THROWS(read_points(ragged));
    std::istringstream late_header("1.5,2.5\n# weighted\n");
    CHECK_THROWS(read_points(late_header));
}

TEST_CASE("coreset file round trip") {
    Coreset s;
    s.dim = 1;
    s.append(std::vector<double>{0.5}, 3);
    s.append(std::vector<double>{2.5}, 7);
    s.source_total = 10;
    std::ostringstream out;
    write_coreset(out, s, {{"k", "2"}});
    CHECK(out.str().find("# source_total=10") != std::string::npos);

    std::istringstream in(out.str());
    std::map<std::string, std::string> header;
    const Coreset back = read_coreset(in, &header);
    CHECK(back.points == s.points);
    CHECK(back.weights == s.weights);
    CHECK(back.source_total == 10);
    CHECK(header.at("k") == "2");

    // Weight column is mandatory for coresets.
    std::istringstream unweighted("0.5\n2.5\n");
    CHECK_THROWS(read_coreset(unweighted));
}

TEST_CASE("checkpoint round trip") {
    StreamConfig config;
    config.params.k = 2;
    config.params.epsilon = 0.4;
    config.params.delta = 0.2;
    config.params.const_q = 1e-7;
    config.base_block_size = 64;
    config.max_depth = 12;
    config.seed = 5;
    CoresetStream stream(2, config);
    Rng rng(50);
    std::vector<double> point(2);
    for (int i = 0; i < 500; ++i) {
        point[0] = rng.uniform(0.0, 10.0);
        point[1] = rng.uniform(0.0, 10.0);
        stream.insert(point);
    }

    std::ostringstream out;
    save_checkpoint(out, stream);
    std::istringstream in(out.str());
    CoresetStream restored = load_checkpoint(in);

    CHECK(restored.total_seen() == stream.total_seen());
    CHECK(restored.buffer() == stream.buffer());
    CHECK(restored.summarized_points() == stream.summarized_points());

    // Identical continuation: same inserts give the same final coreset.
    for (int i = 0; i < 300; ++i) {
        point[0] = 1.0 + 0.01 * i;
        point[1] = 2.0;
        stream.insert(point);
        restored.insert(point);
    }
    const Coreset a = stream.finalize();
    const Coreset b = restored.finalize();
    CHECK(a.points == b.points);
    CHECK(a.weights == b.weights);

    // Checkpoint bytes are reproducible.
    std::ostringstream out_a, out_b;
    save_checkpoint(out_a, stream);
    save_checkpoint(out_b, stream);
    CHECK(out_a.str() == out_b.str());
}

TEST_CASE("evaluate_coreset on the identity coreset") {
    MixtureSpec spec;
    spec.dim = 2;
    spec.components.push_back({{0.0, 0.0}, 1.0, 200});
    spec.components.push_back({{10.0, 10.0}, 1.0, 200});
    const WeightedDataset x = generate_dataset(spec, 6);

    Coreset identity;
    identity.dim = 2;
    identity.points = x.data();
    identity.weights.assign(x.size(), 1);
    identity.source_total = x.size();

    EvalConfig config;
    config.params.k = 2;
    config.params.epsilon = 0.2;
    config.n_solutions = 40;
    config.seed = 11;
    const TrialReport report = evaluate_coreset(x, identity, config);
    REQUIRE(report.fuzzy_ratio.size() == 40);
    for (double r : report.fuzzy_ratio) CHECK(r == 1.0);
    for (double r : report.km_ratio) CHECK(r == 1.0);
    CHECK(report.fuzzy_pass == 40);
    CHECK(report.km_pass == 40);
    CHECK(report.fuzzy_pass_fraction() == 1.0);

    // Byte-stable serialization.
    std::ostringstream a, b;
    write_report(a, report);
    const TrialReport repeat = evaluate_coreset(x, identity, config);
    write_report(b, repeat);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("[ratios]") != std::string::npos);
}

TEST_CASE("evaluate_coreset modes") {
    MixtureSpec spec;
    spec.dim = 1;
    spec.components.push_back({{0.0}, 1.0, 300});
    spec.components.push_back({{30.0}, 1.0, 300});
    const WeightedDataset x = generate_dataset(spec, 7);

    FuzzyParams params;
    params.k = 2;
    params.epsilon = 0.25;
    params.const_q = 2e-7;
    BicriteriaOptions bic;
    bic.alpha = 4.0;
    const Coreset s = fuzzy_coreset(x, params, 13, bic);
    CHECK(s.size() < x.size());

    EvalConfig config;
    config.params = params;
    config.alpha = bic.alpha;
    config.n_solutions = 60;
    config.seed = 14;
    config.mode = SolutionMode::non_negligible;
    const TrialReport strict = evaluate_coreset(x, s, config);
    CHECK(strict.config.box_inflation == 1.0);
    CHECK(strict.fuzzy_lo == doctest::Approx(0.75));
    CHECK(static_cast<double>(strict.fuzzy_pass) >= 0.9 * 60);

    config.mode = SolutionMode::unrestricted;
    const TrialReport loose = evaluate_coreset(x, s, config);
    CHECK(loose.config.box_inflation == 3.0);
    CHECK(loose.fuzzy_lo == doctest::Approx(0.25));
    CHECK(static_cast<double>(loose.fuzzy_pass) >= 0.9 * 60);

    CHECK_THROWS_AS(to_string(solution_mode_from_string("nonsense")),
                    std::invalid_argument);

    config.n_solutions = 0;
    CHECK_THROWS_AS(evaluate_coreset(x, s, config), std::invalid_argument);
}
