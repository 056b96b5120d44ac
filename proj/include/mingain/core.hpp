#pragma once

// Frames of discernment, propositions, basic probability assignments and
// the belief / plausibility functions they induce.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mingain/error.hpp"

namespace mingain {

/// Tolerance on the total mass of a bpa and on probability vectors.
inline constexpr double kMassTolerance = 1e-9;

/// An ordered, finite set of mutually exclusive answers. Copies share the
/// same immutable label table, so copying a Frame is cheap.
class Frame {
public:
    explicit Frame(std::vector<std::string> labels);

    std::size_t size() const noexcept { return data_->labels.size(); }
    const std::vector<std::string>& labels() const noexcept { return data_->labels; }
    const std::string& label(std::size_t i) const { return data_->labels.at(i); }
    std::optional<std::size_t> index_of(std::string_view label) const;

    /// Frames compare equal when they list the same labels in the same order.
    friend bool operator==(const Frame& a, const Frame& b);

private:
    struct Data {
        std::vector<std::string> labels;
        std::unordered_map<std::string, std::size_t> index;
    };
    std::shared_ptr<const Data> data_;
};

/// A subset of a frame, stored as a bit pattern in the frame's element order
/// (element i is bit i). Frames of up to 64 elements occupy a single word.
class Proposition {
public:
    explicit Proposition(Frame frame);

    static Proposition full(Frame frame);
    static Proposition from_indices(Frame frame, std::span<const std::size_t> indices);
    static Proposition from_labels(Frame frame, std::span<const std::string> labels);

    const Frame& frame() const noexcept { return frame_; }

    bool contains(std::size_t i) const;
    void insert(std::size_t i);
    void erase(std::size_t i);

    std::size_t count() const noexcept;
    bool empty() const noexcept;
    bool is_subset_of(const Proposition& other) const;
    bool intersects(const Proposition& other) const;

    std::vector<std::size_t> members() const;
    std::vector<std::string> labels() const;
    /// Renders as "{t1,t2}"; the empty set renders as "{}".
    std::string to_string() const;

    Proposition operator|(const Proposition& other) const;
    Proposition operator&(const Proposition& other) const;
    Proposition operator~() const;

    friend bool operator==(const Proposition& a, const Proposition& b);
    /// Orders by numeric value of the bit pattern; frames must match.
    friend std::strong_ordering operator<=>(const Proposition& a, const Proposition& b);

    std::size_t hash() const noexcept;

private:
    void require_same_frame(const Proposition& other) const;
    void clear_padding() noexcept;

    Frame frame_;
    std::vector<std::uint64_t> words_;
};

struct PropositionHash {
    std::size_t operator()(const Proposition& p) const noexcept { return p.hash(); }
};

struct FocalElement {
    Proposition set;
    double mass;
};

/// One assignment in a bpa under construction: a set of element labels and
/// the mass placed on exactly that set.
struct MassAssignment {
    std::vector<std::string> labels;
    double mass;
};

/// Basic probability assignment. Only focal elements (strictly positive mass)
/// are stored; they keep the order in which they were supplied.
class BPA {
public:
    /// Validates and normalizes. Zero masses are dropped; a total within
    /// kMassTolerance of 1 is rescaled to exactly 1.
    BPA(Frame frame, std::vector<FocalElement> focal);

    const Frame& frame() const noexcept { return frame_; }
    std::span<const FocalElement> focal() const noexcept { return focal_; }
    std::size_t focal_count() const noexcept { return focal_.size(); }

    /// Mass on exactly `a` (0 when `a` is not focal).
    double mass(const Proposition& a) const;

    /// Same masses with focal elements sorted by ascending bit pattern.
    BPA canonical() const;

private:
    Frame frame_;
    std::vector<FocalElement> focal_;
};

BPA make_bpa(const Frame& frame, std::span<const MassAssignment> assignments);
BPA vacuous_bpa(const Frame& frame);

double bel(const BPA& bpa, const Proposition& a);
double pl(const BPA& bpa, const Proposition& a);

/// True when both bpas live on equal frames and agree on every focal mass
/// within `tol` (focal order is ignored).
bool approx_equal(const BPA& a, const BPA& b, double tol);

/// A probability function on the singletons of a frame.
class ProbabilityFunction {
public:
    ProbabilityFunction(Frame frame, std::vector<double> probs);

    const Frame& frame() const noexcept { return frame_; }
    std::span<const double> probs() const noexcept { return probs_; }
    double operator[](std::size_t i) const { return probs_.at(i); }
    std::size_t size() const noexcept { return probs_.size(); }

private:
    Frame frame_;
    std::vector<double> probs_;
};

}  // namespace mingain
