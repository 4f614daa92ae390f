#include "trolllens/model.hpp"

#include <algorithm>
#include <cmath>

#include "trolllens/error.hpp"
#include "trolllens/util.hpp"

namespace trolllens {

using nlohmann::ordered_json;

void Standardizer::fit(const Matrix& x) {
    mean.assign(x.cols, 0.0);
    std_dev.assign(x.cols, 0.0);
    if (x.rows == 0) return;
    const double n = static_cast<double>(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* row = x.row(r);
        for (std::size_t c = 0; c < x.cols; ++c) mean[c] += row[c];
    }
    for (std::size_t c = 0; c < x.cols; ++c) mean[c] /= n;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* row = x.row(r);
        for (std::size_t c = 0; c < x.cols; ++c) {
            double dev = row[c] - mean[c];
            std_dev[c] += dev * dev;
        }
    }
    for (std::size_t c = 0; c < x.cols; ++c) std_dev[c] = std::sqrt(std_dev[c] / n);
}

void Standardizer::transform_row(std::span<double> row) const {
    for (std::size_t c = 0; c < row.size(); ++c)
        row[c] = std_dev[c] > 0.0 ? (row[c] - mean[c]) / std_dev[c] : 0.0;
}

void Standardizer::transform(Matrix& x) const {
    for (std::size_t r = 0; r < x.rows; ++r) transform_row(std::span<double>(x.row(r), x.cols));
}

ordered_json Standardizer::to_json() const {
    return ordered_json{{"mean", mean}, {"std", std_dev}};
}

Standardizer Standardizer::from_json(const ordered_json& j) {
    Standardizer s;
    s.mean = j.at("mean").get<std::vector<double>>();
    s.std_dev = j.at("std").get<std::vector<double>>();
    return s;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) - y*z, computed stably
double cross_entropy_term(double z, int y) {
    double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    return softplus - static_cast<double>(y) * z;
}

} // namespace

double logreg_loss(const Matrix& x, std::span<const int> y, double l2_lambda,
                   std::span<const double> weights, double bias) {
    double loss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* row = x.row(r);
        double z = bias;
        for (std::size_t c = 0; c < x.cols; ++c) z += weights[c] * row[c];
        loss += cross_entropy_term(z, y[r]);
    }
    loss /= static_cast<double>(x.rows);
    double penalty = 0.0;
    for (double w : weights) penalty += w * w;
    return loss + 0.5 * l2_lambda * penalty;
}

void logreg_gradient(const Matrix& x, std::span<const int> y, double l2_lambda,
                     std::span<const double> weights, double bias, std::span<double> grad_w,
                     double& grad_b) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* row = x.row(r);
        double z = bias;
        for (std::size_t c = 0; c < x.cols; ++c) z += weights[c] * row[c];
        double err = sigmoid(z) - static_cast<double>(y[r]);
        for (std::size_t c = 0; c < x.cols; ++c) grad_w[c] += err * row[c];
        grad_b += err;
    }
    const double n = static_cast<double>(x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) grad_w[c] = grad_w[c] / n + l2_lambda * weights[c];
    grad_b /= n;
}

LogRegModel train(const Matrix& x, std::span<const int> y, const LogRegOptions& options) {
    if (x.rows != y.size()) raise("LengthMismatch", "X rows and y length differ");
    if (x.rows == 0) raise("DegenerateLabels", "empty training set");
    bool has0 = false, has1 = false;
    for (int v : y) {
        if (v == 0) has0 = true;
        else if (v == 1) has1 = true;
        else raise("DegenerateLabels", "labels must be 0 or 1");
    }
    if (!has0 || !has1) raise("DegenerateLabels", "training labels contain a single class");
    for (double v : x.data)
        if (!std::isfinite(v)) raise("NonFiniteFeature", "feature matrix contains a non-finite value");

    LogRegModel model;
    model.weights.assign(x.cols, 0.0);
    model.bias = 0.0;
    model.l2_lambda = options.l2_lambda;
    model.seed = options.seed;

    std::vector<double> grad_w(x.cols, 0.0);
    std::vector<double> cand_w(x.cols, 0.0);
    double grad_b = 0.0;
    double loss = logreg_loss(x, y, options.l2_lambda, model.weights, model.bias);

    int iter = 0;
    for (; iter < options.max_iter; ++iter) {
        logreg_gradient(x, y, options.l2_lambda, model.weights, model.bias, grad_w, grad_b);
        double inf_norm = std::abs(grad_b);
        for (double g : grad_w) inf_norm = std::max(inf_norm, std::abs(g));
        if (inf_norm < options.tol) break;

        // halve the step while it would increase the loss
        double step = options.learning_rate;
        double cand_loss = loss;
        double cand_b = model.bias;
        for (int halving = 0; halving < 40; ++halving) {
            for (std::size_t c = 0; c < x.cols; ++c)
                cand_w[c] = model.weights[c] - step * grad_w[c];
            cand_b = model.bias - step * grad_b;
            cand_loss = logreg_loss(x, y, options.l2_lambda, cand_w, cand_b);
            if (cand_loss <= loss) break;
            step *= 0.5;
        }
        if (cand_loss > loss) break; // no progress possible at any step
        model.weights.swap(cand_w);
        model.bias = cand_b;
        loss = cand_loss;
    }
    model.iterations_run = iter;
    model.final_loss = loss;
    return model;
}

double predict_proba(const LogRegModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size())
        raise("DimensionMismatch", "feature vector has dimension " + std::to_string(x.size()) +
                                       ", model expects " + std::to_string(model.weights.size()));
    double z = model.bias;
    for (std::size_t c = 0; c < x.size(); ++c) z += model.weights[c] * x[c];
    return sigmoid(z);
}

int classify(const LogRegModel& model, std::span<const double> x, double threshold) {
    return predict_proba(model, x) >= threshold ? 1 : 0;
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, int k,
                                                       std::uint64_t seed) {
    if (k < 2) raise("InvalidHyperparameter", "k must be >= 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
    if (pos.size() < static_cast<std::size_t>(k) || neg.size() < static_cast<std::size_t>(k))
        raise("TooFewMinority", "both classes need at least k=" + std::to_string(k) + " members");

    util::Rng rng(seed);
    rng.shuffle(pos);
    rng.shuffle(neg);

    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < pos.size(); ++i) folds[i % k].push_back(pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i) folds[i % k].push_back(neg[i]);
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

MacroMetrics evaluate(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size())
        raise("LengthMismatch", "y_true and y_pred differ in length");
    long counts[2][2] = {{0, 0}, {0, 0}}; // [true][pred]
    for (std::size_t i = 0; i < y_true.size(); ++i) ++counts[y_true[i] ? 1 : 0][y_pred[i] ? 1 : 0];

    MacroMetrics m;
    for (int cls = 0; cls < 2; ++cls) {
        long tp = counts[cls][cls];
        long fp = counts[1 - cls][cls];
        long fn = counts[cls][1 - cls];
        double precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        double recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        double f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        m.precision += 0.5 * precision;
        m.recall += 0.5 * recall;
        m.f1 += 0.5 * f1;
    }
    return m;
}

MacroMetrics EvalReport::mean() const {
    MacroMetrics m;
    if (folds.empty()) return m;
    for (const MacroMetrics& f : folds) {
        m.precision += f.precision;
        m.recall += f.recall;
        m.f1 += f.f1;
    }
    const double n = static_cast<double>(folds.size());
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    return m;
}

FeatureBuilder precomputed_features(const Matrix& all_rows) {
    return [&all_rows](std::span<const std::size_t> train_rows,
                       std::span<const std::size_t> test_rows) {
        FoldFeatures out;
        out.train_x = Matrix(train_rows.size(), all_rows.cols);
        out.test_x = Matrix(test_rows.size(), all_rows.cols);
        for (std::size_t i = 0; i < train_rows.size(); ++i)
            std::copy(all_rows.row(train_rows[i]), all_rows.row(train_rows[i]) + all_rows.cols,
                      out.train_x.row(i));
        for (std::size_t i = 0; i < test_rows.size(); ++i)
            std::copy(all_rows.row(test_rows[i]), all_rows.row(test_rows[i]) + all_rows.cols,
                      out.test_x.row(i));
        return out;
    };
}

namespace {

void accumulate_confusion(EvalReport& report, std::span<const int> y_true,
                          std::span<const int> y_pred) {
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1 && y_pred[i] == 1) ++report.tp;
        else if (y_true[i] == 0 && y_pred[i] == 1) ++report.fp;
        else if (y_true[i] == 1 && y_pred[i] == 0) ++report.fn;
        else ++report.tn;
    }
}

} // namespace

EvalReport cross_validate(const FeatureBuilder& builder, std::span<const int> y, int k,
                          std::uint64_t fold_seed, const LogRegOptions& options,
                          const std::string& method_name) {
    EvalReport report;
    report.method = method_name;
    auto folds = stratified_kfold(y, k, fold_seed);

    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train_rows;
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        std::sort(train_rows.begin(), train_rows.end());
        const std::vector<std::size_t>& test_rows = folds[f];

        FoldFeatures features = builder(train_rows, test_rows);

        Standardizer scaler;
        scaler.fit(features.train_x);
        scaler.transform(features.train_x);
        scaler.transform(features.test_x);

        std::vector<int> train_y(train_rows.size()), test_y(test_rows.size());
        for (std::size_t i = 0; i < train_rows.size(); ++i) train_y[i] = y[train_rows[i]];
        for (std::size_t i = 0; i < test_rows.size(); ++i) test_y[i] = y[test_rows[i]];

        LogRegModel model = train(features.train_x, train_y, options);

        std::vector<int> pred(test_rows.size(), 0);
        for (std::size_t i = 0; i < test_rows.size(); ++i)
            pred[i] = classify(model,
                               std::span<const double>(features.test_x.row(i), features.test_x.cols));

        report.folds.push_back(evaluate(test_y, pred));
        accumulate_confusion(report, test_y, pred);
    }
    return report;
}

EvalReport cross_validate_baseline(BaselineKind kind, std::span<const int> y, int k,
                                   std::uint64_t fold_seed, std::uint64_t predict_seed,
                                   const std::string& method_name) {
    EvalReport report;
    report.method = method_name;
    auto folds = stratified_kfold(y, k, fold_seed);
    util::Rng rng(predict_seed);

    for (std::size_t f = 0; f < folds.size(); ++f) {
        long train_pos = 0, train_total = 0;
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            for (std::size_t row : folds[g]) {
                train_pos += y[row];
                ++train_total;
            }
        }
        int majority = (2 * train_pos > train_total) ? 1 : 0;

        const std::vector<std::size_t>& test_rows = folds[f];
        std::vector<int> test_y(test_rows.size()), pred(test_rows.size());
        for (std::size_t i = 0; i < test_rows.size(); ++i) {
            test_y[i] = y[test_rows[i]];
            pred[i] = kind == BaselineKind::majority_class ? majority
                                                           : (rng.uniform01() < 0.5 ? 0 : 1);
        }
        report.folds.push_back(evaluate(test_y, pred));
        accumulate_confusion(report, test_y, pred);
    }
    return report;
}

std::vector<ImportanceEntry> feature_importance(const LogRegModel& model,
                                                const FeatureSchema& schema,
                                                const std::string& family, std::size_t top_k) {
    if (schema.dims.size() != model.weights.size())
        raise("LengthMismatch", "schema dimension does not match model weights");
    std::vector<ImportanceEntry> entries;
    bool family_exists = false;
    for (std::size_t i = 0; i < schema.dims.size(); ++i) {
        if (schema.dims[i].family != family) continue;
        family_exists = true;
        entries.push_back({schema.dims[i].name, model.weights[i]});
    }
    if (!family_exists)
        raise("UnknownFamily", "schema has no family named \"" + family + "\"");
    std::sort(entries.begin(), entries.end(), [](const ImportanceEntry& a, const ImportanceEntry& b) {
        double ma = std::abs(a.weight), mb = std::abs(b.weight);
        if (ma != mb) return ma > mb;
        return a.name < b.name;
    });
    if (entries.size() > top_k) entries.resize(top_k);
    return entries;
}

ordered_json LogRegModel::to_json() const {
    ordered_json j;
    j["kind"] = "logreg_model";
    j["weights"] = weights;
    j["bias"] = bias;
    j["l2_lambda"] = l2_lambda;
    j["schema_hash"] = schema_hash;
    j["seed"] = seed;
    j["iterations_run"] = iterations_run;
    j["final_loss"] = final_loss;
    return j;
}

LogRegModel LogRegModel::from_json(const ordered_json& j) {
    if (!j.is_object() || j.value("kind", "") != std::string("logreg_model"))
        raise("MalformedLine", "not a logreg_model artifact");
    LogRegModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.l2_lambda = j.at("l2_lambda").get<double>();
    m.schema_hash = j.at("schema_hash").get<std::uint64_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.iterations_run = j.at("iterations_run").get<int>();
    m.final_loss = j.at("final_loss").get<double>();
    return m;
}

} // namespace trolllens
