#pragma once

#include "websift/boosting.hpp"
#include "websift/forest.hpp"
#include "websift/knn.hpp"
#include "websift/lasso.hpp"
#include "websift/svm.hpp"

#include <span>
#include <string>
#include <variant>

namespace websift {

enum class ClassifierKind { lasso, knn, svm, rf, boost };

ClassifierKind parse_classifier_kind(const std::string& name);
std::string to_string(ClassifierKind kind);
bool is_ensemble(ClassifierKind kind);

// Self-describing wrapper for trained models: kind, learned parameters and
// the schema fingerprint of the data it was fit on. `websift train` /
// `websift score` round-trip through the JSON form.
struct AnyModel {
    std::variant<LassoModel, KnnModel, SvmModel, ForestModel, BoostModel> model;
    std::string schema_fingerprint;

    ClassifierKind kind() const;
    double score(std::span<const double> row) const;

    std::string to_json_string() const;
    static AnyModel from_json_string(const std::string& text);
};

} // namespace websift
