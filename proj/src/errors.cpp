/*
Copyright 2026 bekktail developers
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


#include "bekktail/errors.hpp"

namespace bekk {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::AllZeroCoefficients: return "AllZeroCoefficients";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ComplexEigenvalues: return "ComplexEigenvalues";
        case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
        case ErrorCode::NotSimultaneouslyDiagonalizable: return "NotSimultaneouslyDiagonalizable";
        case ErrorCode::NoCommonRealEigenvector: return "NoCommonRealEigenvector";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::NoRoot: return "NoRoot";
        case ErrorCode::TieUndetermined: return "TieUndetermined";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::UnknownExample: return "UnknownExample";
    }
    return "Unknown";
}

}  // namespace bekk
