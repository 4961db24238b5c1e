// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/sexp.hpp"

#include <cctype>

namespace ll2 {

SexpError::SexpError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    bool at_end()
    {
        skip();
        return pos_ >= text_.size();
    }

    Sexp read()
    {
        skip();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        if (text_[pos_] == ')') {
            fail("unexpected ')'");
        }
        if (text_[pos_] == '(') {
            Sexp list;
            list.is_list = true;
            list.line = line_;
            ++pos_;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) {
                    fail("missing ')' for list opened on line " + std::to_string(list.line));
                }
                if (text_[pos_] == ')') {
                    ++pos_;
                    return list;
                }
                list.items.push_back(read());
            }
        }
        Sexp atom;
        atom.line = line_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
            ++pos_;
        }
        atom.atom = std::string(text_.substr(start, pos_ - start));
        for (auto& c : atom.atom) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        return atom;
    }

private:
    void skip()
    {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& why) const { throw SexpError(line_, why); }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

} // namespace

Sexp read_sexp(std::string_view text)
{
    Reader reader(text);
    Sexp e = reader.read();
    if (!reader.at_end()) {
        throw SexpError(e.line, "trailing input after expression");
    }
    return e;
}

std::vector<Sexp> read_sexps(std::string_view text)
{
    Reader reader(text);
    std::vector<Sexp> out;
    while (!reader.at_end()) {
        out.push_back(reader.read());
    }
    return out;
}

std::string to_string(const Sexp& e)
{
    if (!e.is_list) {
        return e.atom;
    }
    std::string out = "(";
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        out += (i ? " " : "") + to_string(e.items[i]);
    }
    return out + ")";
}

} // namespace ll2
