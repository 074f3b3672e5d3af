#pragma once

#include "commentrisk/classify.hpp"

#include <string>
#include <vector>

namespace commentrisk::eval {

/// Positive means "inconsistent".
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    [[nodiscard]] std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
    void add(bool predicted, bool actual) noexcept;

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept
    {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws LengthMismatch or EmptyInput.
ConfusionMatrix score(const std::vector<bool>& predictions, const std::vector<bool>& labels);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Zero denominators yield 0 instead of an error.
Metrics metrics(const ConfusionMatrix& m);

/// Harmonic mean of precision and recall (0 when both are 0).
double f1_from(double precision, double recall);

/// True when a reported (P, R, F1) triple agrees with F1's definition within `tolerance`.
bool is_consistent_row(double precision, double recall, double f1, double tolerance = 5e-4);

/// The classifier is asked whether the old comment still fits the new code; prediction is
/// "inconsistent" when it says no.
bool predict_inconsistent(classify::Classifier& classifier, const classify::Cup2Instance& instance);

struct EvalResult {
    ConfusionMatrix matrix;
    std::size_t failed = 0;  ///< instances the classifier could not decide (excluded from the matrix)
};

EvalResult evaluate(classify::Classifier& classifier, const std::vector<classify::Cup2Instance>& instances,
                    unsigned concurrency = 1);

}  // namespace commentrisk::eval
