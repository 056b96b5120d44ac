#include "mingain/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace mingain {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidFrame: return "InvalidFrame";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::EmptySetMass: return "EmptySetMass";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::MassSumViolation: return "MassSumViolation";
    case ErrorCode::DuplicateFocal: return "DuplicateFocal";
    case ErrorCode::InvalidRelation: return "InvalidRelation";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::ZeroTotalMass: return "ZeroTotalMass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InconsistentConditional: return "InconsistentConditional";
    case ErrorCode::IncompleteConditionals: return "IncompleteConditionals";
    case ErrorCode::NotFeasible: return "NotFeasible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::TotalConflict: return "TotalConflict";
    case ErrorCode::ConflictDetected: return "ConflictDetected";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Frame

Frame::Frame(std::vector<std::string> labels)
{
    if (labels.empty())
        throw Error(ErrorCode::InvalidFrame, "a frame needs at least one element");
    auto data = std::make_shared<Data>();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty())
            throw Error(ErrorCode::InvalidFrame, "frame labels must be non-empty");
        if (!data->index.emplace(labels[i], i).second)
            throw Error(ErrorCode::InvalidFrame, "duplicate frame label '" + labels[i] + "'");
    }
    data->labels = std::move(labels);
    data_ = std::move(data);
}

std::optional<std::size_t> Frame::index_of(std::string_view label) const
{
    auto it = data_->index.find(std::string(label));
    if (it == data_->index.end())
        return std::nullopt;
    return it->second;
}

bool operator==(const Frame& a, const Frame& b)
{
    return a.data_ == b.data_ || a.data_->labels == b.data_->labels;
}

// ---------------------------------------------------------------------------
// Proposition

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

}  // namespace

Proposition::Proposition(Frame frame)
    : frame_(std::move(frame)), words_(word_count(frame_.size()), 0)
{
}

Proposition Proposition::full(Frame frame)
{
    Proposition p(std::move(frame));
    std::fill(p.words_.begin(), p.words_.end(), ~std::uint64_t{0});
    p.clear_padding();
    return p;
}

Proposition Proposition::from_indices(Frame frame, std::span<const std::size_t> indices)
{
    Proposition p(std::move(frame));
    for (auto i : indices)
        p.insert(i);
    return p;
}

Proposition Proposition::from_labels(Frame frame, std::span<const std::string> labels)
{
    Proposition p(std::move(frame));
    for (const auto& label : labels) {
        auto i = p.frame_.index_of(label);
        if (!i)
            throw Error(ErrorCode::UnknownLabel, "label '" + label + "' is not in the frame");
        p.insert(*i);
    }
    return p;
}

bool Proposition::contains(std::size_t i) const
{
    if (i >= frame_.size())
        return false;
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void Proposition::insert(std::size_t i)
{
    if (i >= frame_.size())
        throw Error(ErrorCode::UnknownLabel, "element index out of range");
    words_[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
}

void Proposition::erase(std::size_t i)
{
    if (i >= frame_.size())
        return;
    words_[i / kWordBits] &= ~(std::uint64_t{1} << (i % kWordBits));
}

std::size_t Proposition::count() const noexcept
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool Proposition::empty() const noexcept
{
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool Proposition::is_subset_of(const Proposition& other) const
{
    require_same_frame(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
        if (words_[k] & ~other.words_[k])
            return false;
    return true;
}

bool Proposition::intersects(const Proposition& other) const
{
    require_same_frame(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
        if (words_[k] & other.words_[k])
            return true;
    return false;
}

std::vector<std::size_t> Proposition::members() const
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
        auto w = words_[k];
        while (w) {
            out.push_back(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

std::vector<std::string> Proposition::labels() const
{
    std::vector<std::string> out;
    for (auto i : members())
        out.push_back(frame_.label(i));
    return out;
}

std::string Proposition::to_string() const
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto i : members()) {
        if (!first)
            os << ',';
        os << frame_.label(i);
        first = false;
    }
    os << '}';
    return os.str();
}

Proposition Proposition::operator|(const Proposition& other) const
{
    require_same_frame(other);
    Proposition out = *this;
    for (std::size_t k = 0; k < words_.size(); ++k)
        out.words_[k] |= other.words_[k];
    return out;
}

Proposition Proposition::operator&(const Proposition& other) const
{
    require_same_frame(other);
    Proposition out = *this;
    for (std::size_t k = 0; k < words_.size(); ++k)
        out.words_[k] &= other.words_[k];
    return out;
}

Proposition Proposition::operator~() const
{
    Proposition out = *this;
    for (auto& w : out.words_)
        w = ~w;
    out.clear_padding();
    return out;
}

bool operator==(const Proposition& a, const Proposition& b)
{
    return a.frame_ == b.frame_ && a.words_ == b.words_;
}

std::strong_ordering operator<=>(const Proposition& a, const Proposition& b)
{
    a.require_same_frame(b);
    for (std::size_t k = a.words_.size(); k-- > 0;) {
        if (auto c = a.words_[k] <=> b.words_[k]; c != 0)
            return c;
    }
    return std::strong_ordering::equal;
}

std::size_t Proposition::hash() const noexcept
{
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words_)
        h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

void Proposition::require_same_frame(const Proposition& other) const
{
    if (!(frame_ == other.frame_))
        throw Error(ErrorCode::FrameMismatch, "propositions belong to different frames");
}

void Proposition::clear_padding() noexcept
{
    auto tail = frame_.size() % kWordBits;
    if (tail != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << tail) - 1;
}

// ---------------------------------------------------------------------------
// BPA

BPA::BPA(Frame frame, std::vector<FocalElement> focal) : frame_(std::move(frame))
{
    std::unordered_set<Proposition, PropositionHash> seen;
    double total = 0.0;
    for (auto& fe : focal) {
        if (!(fe.set.frame() == frame_))
            throw Error(ErrorCode::FrameMismatch, "focal element " + fe.set.to_string()
                                                      + " is not over the bpa's frame");
        if (!std::isfinite(fe.mass))
            throw Error(ErrorCode::NegativeMass, "mass on " + fe.set.to_string() + " is not finite");
        if (fe.mass < 0.0)
            throw Error(ErrorCode::NegativeMass, "negative mass on " + fe.set.to_string());
        if (fe.set.empty() && fe.mass > 0.0)
            throw Error(ErrorCode::EmptySetMass, "the empty set cannot carry mass");
        if (!seen.insert(fe.set).second)
            throw Error(ErrorCode::DuplicateFocal, "set " + fe.set.to_string() + " listed twice");
        total += fe.mass;
        if (fe.mass > 0.0)
            focal_.push_back(std::move(fe));
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
        std::ostringstream os;
        os.precision(12);
        os << "masses sum to " << total << ", expected 1";
        throw Error(ErrorCode::MassSumViolation, os.str());
    }
    if (total != 1.0)
        for (auto& fe : focal_)
            fe.mass /= total;
}

double BPA::mass(const Proposition& a) const
{
    for (const auto& fe : focal_)
        if (fe.set == a)
            return fe.mass;
    return 0.0;
}

BPA BPA::canonical() const
{
    BPA out = *this;
    std::stable_sort(out.focal_.begin(), out.focal_.end(),
                     [](const FocalElement& x, const FocalElement& y) { return x.set < y.set; });
    return out;
}

BPA make_bpa(const Frame& frame, std::span<const MassAssignment> assignments)
{
    std::vector<FocalElement> focal;
    focal.reserve(assignments.size());
    for (const auto& a : assignments)
        focal.push_back({Proposition::from_labels(frame, a.labels), a.mass});
    return BPA(frame, std::move(focal));
}

BPA vacuous_bpa(const Frame& frame)
{
    return BPA(frame, {{Proposition::full(frame), 1.0}});
}

double bel(const BPA& bpa, const Proposition& a)
{
    if (!(a.frame() == bpa.frame()))
        throw Error(ErrorCode::FrameMismatch, "proposition is not over the bpa's frame");
    double sum = 0.0;
    for (const auto& fe : bpa.focal())
        if (fe.set.is_subset_of(a))
            sum += fe.mass;
    return sum;
}

double pl(const BPA& bpa, const Proposition& a)
{
    if (!(a.frame() == bpa.frame()))
        throw Error(ErrorCode::FrameMismatch, "proposition is not over the bpa's frame");
    return std::clamp(1.0 - bel(bpa, ~a), 0.0, 1.0);
}

bool approx_equal(const BPA& a, const BPA& b, double tol)
{
    if (!(a.frame() == b.frame()))
        return false;
    for (const auto& fe : a.focal())
        if (std::abs(fe.mass - b.mass(fe.set)) > tol)
            return false;
    for (const auto& fe : b.focal())
        if (std::abs(fe.mass - a.mass(fe.set)) > tol)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// ProbabilityFunction

ProbabilityFunction::ProbabilityFunction(Frame frame, std::vector<double> probs)
    : frame_(std::move(frame)), probs_(std::move(probs))
{
    if (probs_.size() != frame_.size())
        throw Error(ErrorCode::DimensionMismatch, "probability vector does not match frame size");
    double total = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0)
            throw Error(ErrorCode::InvalidProbability, "probabilities must be finite and nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
        throw Error(ErrorCode::InvalidProbability, "probabilities do not sum to 1");
}

}  // namespace mingain
