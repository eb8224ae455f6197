#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "predcause/variables.hpp"

namespace predcause {

/// Column-major table of integer-coded discrete observations. Codes are
/// 0..arity-1 per variable; all columns have equal length.
struct Dataset {
    std::vector<Variable> variables;
    std::vector<std::vector<std::uint8_t>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

    VarId index_of(const std::string& name) const {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i].name == name) return static_cast<VarId>(i);
        throw std::out_of_range("unknown variable '" + name + "'");
    }

    bool has_variable(const std::string& name) const {
        for (const auto& v : variables)
            if (v.name == name) return true;
        return false;
    }

    void validate() const {
        if (columns.size() != variables.size())
            throw std::invalid_argument("dataset: column count does not match variable count");
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].size() != rows())
                throw std::invalid_argument("dataset: ragged columns");
            for (std::uint8_t code : columns[i])
                if (code >= variables[i].arity)
                    throw std::invalid_argument("dataset: code out of range for '" +
                                                variables[i].name + "'");
        }
    }
};

}  // namespace predcause
