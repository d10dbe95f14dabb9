#pragma once

#include <algorithm>
#include <vector>

#include "casimir/plate.hpp"

namespace casimir {

// An ordered stack of plates with strictly increasing positions.
// Plate and gap indices are 1-based throughout the public API:
// plate(i) for i in [1, N], gap(i) = a_{i+1} - a_i for i in [1, N-1].
class Stack {
public:
    explicit Stack(std::vector<Plate> plates) : plates_(std::move(plates)) {
        if (plates_.empty()) throw ValidationError("stack needs at least one plate");
        for (std::size_t i = 0; i + 1 < plates_.size(); ++i) {
            if (!(plates_[i].position < plates_[i + 1].position)) {
                throw ValidationError("plate positions must be strictly increasing");
            }
        }
    }

    int size() const { return static_cast<int>(plates_.size()); }

    const Plate& plate(int i) const {
        if (i < 1 || i > size()) throw IndexOutOfRange("plate index out of range");
        return plates_[static_cast<std::size_t>(i - 1)];
    }

    double gap(int i) const {
        if (i < 1 || i >= size()) throw IndexOutOfRange("gap index out of range");
        return plates_[static_cast<std::size_t>(i)].position -
               plates_[static_cast<std::size_t>(i - 1)].position;
    }

    double min_gap() const {
        double g = gap(1);
        for (int i = 2; i < size(); ++i) g = std::min(g, gap(i));
        return g;
    }

    const std::vector<Plate>& plates() const { return plates_; }

    // Sub-stack of plates [first, last], 1-based inclusive.
    Stack slice(int first, int last) const {
        if (first < 1 || last > size() || first > last) {
            throw IndexOutOfRange("invalid slice bounds");
        }
        return Stack(std::vector<Plate>(plates_.begin() + (first - 1),
                                        plates_.begin() + last));
    }

    bool kappa_only() const {
        for (const Plate& p : plates_) {
            if (!p.kappa_only()) return false;
        }
        return true;
    }

    bool has_response_hook() const {
        for (const Plate& p : plates_) {
            if (p.response) return true;
        }
        return false;
    }

    // Every coupling swapped (mode-swap test helper).
    Stack lambda_swapped() const {
        std::vector<Plate> out;
        out.reserve(plates_.size());
        for (const Plate& p : plates_) out.push_back(p.lambda_swapped());
        return Stack(std::move(out));
    }

    // Same geometry with plate i moved to a new position; the move must not
    // reorder the stack.
    Stack with_position(int i, double position) const {
        std::vector<Plate> out = plates_;
        out[static_cast<std::size_t>(i - 1)].position = position;
        return Stack(std::move(out));
    }

    // All positions rescaled by s > 0.
    Stack rescaled(double s) const {
        std::vector<Plate> out = plates_;
        for (Plate& p : out) p.position *= s;
        return Stack(std::move(out));
    }

private:
    std::vector<Plate> plates_;
};

} // namespace casimir
