#pragma once

#include <string>
#include <utility>

#include "spectra/formula.hpp"

namespace spectra {

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(msg + " at line " + std::to_string(line) + ", column " +
                std::to_string(column)),
          line(line),
          column(column) {}
    int line;
    int column;
};

// Grammar (whitespace-insensitive, '#' starts a line comment):
//   formula := iff
//   iff     := implies { "<->" implies }
//   implies := or [ "->" implies ]
//   or      := and { "|" and }
//   and     := unary { "&" unary }
//   unary   := "~" unary | quant | atom | "(" formula ")"
//   quant   := ("exists" | "forall") ident "." unary
//   atom    := ident "(" ident "," ident ")" | ident "=" ident | "true" | "false"
FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab);

// A .fo document: a `vocab R1 R2 ...` header line followed by one sentence.
struct FoDocument {
    Vocabulary vocab;
    FormulaPtr formula;
};

FoDocument parse_fo_document(const std::string& text);
FoDocument load_fo_file(const std::string& path);
std::string render_fo_document(const Vocabulary& vocab, const FormulaPtr& f);

}  // namespace spectra
