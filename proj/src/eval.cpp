#include "commentrisk/eval.hpp"

#include "commentrisk/error.hpp"

#include <cmath>

namespace commentrisk::eval {

void ConfusionMatrix::add(bool predicted, bool actual) noexcept
{
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
}

ConfusionMatrix score(const std::vector<bool>& predictions, const std::vector<bool>& labels)
{
    if (predictions.size() != labels.size()) {
        throw Error(ErrorKind::LengthMismatch, "predictions and labels differ in length");
    }
    if (predictions.empty()) {
        throw Error(ErrorKind::EmptyInput, "nothing to score");
    }
    ConfusionMatrix m;
    for (std::size_t i = 0; i < labels.size(); ++i) m.add(predictions[i], labels[i]);
    return m;
}

double f1_from(double precision, double recall)
{
    const double sum = precision + recall;
    return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

Metrics metrics(const ConfusionMatrix& m)
{
    Metrics out;
    const auto pred_pos = m.tp + m.fp;
    const auto actual_pos = m.tp + m.fn;
    out.precision = pred_pos == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(pred_pos);
    out.recall = actual_pos == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(actual_pos);
    out.f1 = f1_from(out.precision, out.recall);
    return out;
}

bool is_consistent_row(double precision, double recall, double f1, double tolerance)
{
    return std::fabs(f1_from(precision, recall) - f1) <= tolerance;
}

namespace {

records::MethodRecord as_record(const classify::Cup2Instance& inst)
{
    records::MethodRecord r;
    r.old_code = inst.old_code;
    r.new_code = inst.new_code;
    r.old_comment = inst.old_comment;
    r.new_comment = inst.old_comment;
    r.signature_key = inst.id;
    return r;
}

}  // namespace

bool predict_inconsistent(classify::Classifier& classifier, const classify::Cup2Instance& instance)
{
    return !classifier.classify(as_record(instance)).consistent_with_new_code;
}

EvalResult evaluate(classify::Classifier& classifier, const std::vector<classify::Cup2Instance>& instances,
                    unsigned concurrency)
{
    std::vector<records::MethodRecord> recs;
    recs.reserve(instances.size());
    for (const auto& inst : instances) recs.push_back(as_record(inst));
    const auto outcomes = classify::classify_batch(recs, classifier, concurrency);

    EvalResult result;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!outcomes[i].verdict) {
            ++result.failed;
            continue;
        }
        result.matrix.add(!outcomes[i].verdict->consistent_with_new_code, instances[i].label);
    }
    return result;
}

}  // namespace commentrisk::eval
