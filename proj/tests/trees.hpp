#pragma once

#include <set>
#include <string>

// Nodes of the two search trees for binary words avoiding abelian squares
// of period at least 2, as published.
namespace trees {

inline const std::set<std::string> kFullTree = {
    "0", "1", "00", "01", "10", "11", "000", "001", "010", "011", "100", "101", "110", "111",
    "0001", "0010", "0011", "0100", "0111", "1000", "1011", "1100", "1101", "1110",
    "00010", "00011", "00100", "00111", "01000", "01110", "10001", "10111", "11000", "11011",
    "11100", "11101", "000100", "000111", "001000", "001110", "011100", "100011", "110001",
    "110111", "111000", "111011", "0001000", "0001110", "0011100", "0111000", "1000111",
    "1100011", "1110001", "1110111", "00011100", "00111000", "01110001", "10001110",
    "11000111", "11100011", "000111000", "001110001", "011100011", "100011100", "110001110",
    "111000111", "0011100011", "1100011100"};

inline const std::set<std::string> kLyndonTree = {
    "0", "1", "00", "01", "11", "000", "001", "010", "011", "111", "0001", "0010", "0011",
    "0111", "00010", "00011", "00100", "00111", "01110", "000100", "000111", "001000",
    "001110", "0001000", "0001110", "0011100", "00011100", "000111000"};

// Listed with the restricted tree although it is not a prefix of any Lyndon
// power (its Lyndon prefixes are 0 and 001).
inline const std::string kLyndonTreeExtra = "001000";

}  // namespace trees
