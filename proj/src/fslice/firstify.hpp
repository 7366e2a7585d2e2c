#pragma once

#include <map>

#include "fslice/lang.hpp"
#include "fslice/slicer.hpp"

namespace fslice {

struct FirstifyOptions {
  std::size_t max_specializations = 512;
};

struct FirstifyResult {
  Program program;                // first-order, validated
  std::map<Label, Label> origin;  // firstified label -> source label
};

/// Specializes every function per binding of its functional parameters.
/// A partial application `(let g <- (f a b) ...)` becomes a cons list of the
/// captured data arguments; calls through it unpack the list and call the
/// specialization of `f`. Functions returned, stored in data or applied to
/// primitives other than as callees raise FirstifyUnsupported.
FirstifyResult firstify(const Program& ho, const FirstifyOptions& options = {});

/// Keep map for the source program: a label is kept when any of its images
/// is. A functional argument with no image follows its application.
KeepMap map_back(const Program& ho, const FirstifyResult& fr, const KeepMap& keep);

}  // namespace fslice
