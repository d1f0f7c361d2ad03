#include "websift/model_io.hpp"

#include "websift/errors.hpp"

#include <nlohmann/json.hpp>

namespace websift {

using nlohmann::json;

ClassifierKind parse_classifier_kind(const std::string& name) {
    if (name == "lasso") return ClassifierKind::lasso;
    if (name == "knn") return ClassifierKind::knn;
    if (name == "svm") return ClassifierKind::svm;
    if (name == "rf") return ClassifierKind::rf;
    if (name == "boost" || name == "xgboost") return ClassifierKind::boost;
    throw SchemaError("unknown classifier '" + name + "'");
}

std::string to_string(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::lasso: return "lasso";
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::svm: return "svm";
    case ClassifierKind::rf: return "rf";
    case ClassifierKind::boost: return "boost";
    }
    return "?";
}

bool is_ensemble(ClassifierKind kind) {
    return kind == ClassifierKind::rf || kind == ClassifierKind::boost;
}

namespace {

json standardizer_to_json(const Standardizer& s) {
    return json{{"mean", s.mean}, {"scale", s.scale}};
}

Standardizer standardizer_from_json(const json& j) {
    Standardizer s;
    s.mean = j.at("mean").get<std::vector<double>>();
    s.scale = j.at("scale").get<std::vector<double>>();
    return s;
}

json tree_to_json(const DecisionTree& tree) {
    json nodes = json::array();
    for (const auto& node : tree.nodes)
        nodes.push_back(json::array(
            {node.feature, node.threshold, node.left, node.right, node.value}));
    return nodes;
}

DecisionTree tree_from_json(const json& j) {
    DecisionTree tree;
    for (const auto& entry : j) {
        TreeNode node;
        node.feature = entry.at(0).get<int>();
        node.threshold = entry.at(1).get<double>();
        node.left = entry.at(2).get<int>();
        node.right = entry.at(3).get<int>();
        node.value = entry.at(4).get<double>();
        tree.nodes.push_back(node);
    }
    return tree;
}

} // namespace

ClassifierKind AnyModel::kind() const {
    switch (model.index()) {
    case 0: return ClassifierKind::lasso;
    case 1: return ClassifierKind::knn;
    case 2: return ClassifierKind::svm;
    case 3: return ClassifierKind::rf;
    default: return ClassifierKind::boost;
    }
}

double AnyModel::score(std::span<const double> row) const {
    return std::visit([&](const auto& m) { return m.score(row); }, model);
}

std::string AnyModel::to_json_string() const {
    json j;
    j["model"] = to_string(kind());
    j["schema_fingerprint"] = schema_fingerprint;
    json params;
    switch (kind()) {
    case ClassifierKind::lasso: {
        const auto& m = std::get<LassoModel>(model);
        params["beta"] = m.beta;
        params["intercept"] = m.intercept;
        params["lambda"] = m.lambda;
        params["standardizer"] = standardizer_to_json(m.standardizer);
        break;
    }
    case ClassifierKind::knn: {
        const auto& m = std::get<KnnModel>(model);
        params["k"] = m.k;
        params["p"] = m.p;
        params["reference"] = m.reference;
        params["labels"] = m.labels;
        params["standardizer"] = standardizer_to_json(m.standardizer);
        break;
    }
    case ClassifierKind::svm: {
        const auto& m = std::get<SvmModel>(model);
        params["support_vectors"] = m.support_vectors;
        params["alpha_y"] = m.alpha_y;
        params["bias"] = m.bias;
        params["gamma"] = m.gamma;
        params["cost"] = m.cost;
        params["platt_slope"] = m.platt_slope;
        params["standardizer"] = standardizer_to_json(m.standardizer);
        break;
    }
    case ClassifierKind::rf: {
        const auto& m = std::get<ForestModel>(model);
        json trees = json::array();
        for (const auto& tree : m.trees) trees.push_back(tree_to_json(tree));
        params["trees"] = trees;
        params["weights"] = m.weights;
        params["oob_accuracy"] = m.oob_accuracy;
        params["importances"] = m.importances;
        params["mtry"] = m.options.mtry;
        params["n_trees"] = m.options.n_trees;
        params["degenerate"] = m.degenerate;
        break;
    }
    case ClassifierKind::boost: {
        const auto& m = std::get<BoostModel>(model);
        json trees = json::array();
        for (const auto& tree : m.trees) trees.push_back(tree_to_json(tree));
        params["trees"] = trees;
        params["base_margin"] = m.base_margin;
        params["learning_rate"] = m.options.learning_rate;
        params["max_depth"] = m.options.max_depth;
        params["l2_reg"] = m.options.l2_reg;
        params["train_loss"] = m.train_loss;
        break;
    }
    }
    j["params"] = params;
    return j.dump(2);
}

AnyModel AnyModel::from_json_string(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw SchemaError("model file: invalid JSON");
    AnyModel out;
    try {
        out.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
        ClassifierKind kind = parse_classifier_kind(j.at("model").get<std::string>());
        const json& params = j.at("params");
        switch (kind) {
        case ClassifierKind::lasso: {
            LassoModel m;
            m.beta = params.at("beta").get<std::vector<double>>();
            m.intercept = params.at("intercept").get<double>();
            m.lambda = params.at("lambda").get<double>();
            m.standardizer = standardizer_from_json(params.at("standardizer"));
            out.model = std::move(m);
            break;
        }
        case ClassifierKind::knn: {
            KnnModel m;
            m.k = params.at("k").get<int>();
            m.p = params.at("p").get<std::size_t>();
            m.reference = params.at("reference").get<std::vector<double>>();
            m.labels = params.at("labels").get<std::vector<int>>();
            m.standardizer = standardizer_from_json(params.at("standardizer"));
            out.model = std::move(m);
            break;
        }
        case ClassifierKind::svm: {
            SvmModel m;
            m.support_vectors =
                params.at("support_vectors").get<std::vector<std::vector<double>>>();
            m.alpha_y = params.at("alpha_y").get<std::vector<double>>();
            m.bias = params.at("bias").get<double>();
            m.gamma = params.at("gamma").get<double>();
            m.cost = params.at("cost").get<double>();
            m.platt_slope = params.at("platt_slope").get<double>();
            m.standardizer = standardizer_from_json(params.at("standardizer"));
            out.model = std::move(m);
            break;
        }
        case ClassifierKind::rf: {
            ForestModel m;
            for (const auto& tree : params.at("trees")) m.trees.push_back(tree_from_json(tree));
            m.weights = params.at("weights").get<std::vector<double>>();
            m.oob_accuracy = params.at("oob_accuracy").get<std::vector<double>>();
            m.importances = params.at("importances").get<std::vector<double>>();
            m.options.mtry = params.at("mtry").get<int>();
            m.options.n_trees = params.at("n_trees").get<int>();
            m.degenerate = params.at("degenerate").get<bool>();
            out.model = std::move(m);
            break;
        }
        case ClassifierKind::boost: {
            BoostModel m;
            for (const auto& tree : params.at("trees")) m.trees.push_back(tree_from_json(tree));
            m.base_margin = params.at("base_margin").get<double>();
            m.options.learning_rate = params.at("learning_rate").get<double>();
            m.options.max_depth = params.at("max_depth").get<int>();
            m.options.l2_reg = params.at("l2_reg").get<double>();
            m.train_loss = params.at("train_loss").get<std::vector<double>>();
            out.model = std::move(m);
            break;
        }
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model file: ") + e.what());
    }
    return out;
}

} // namespace websift
