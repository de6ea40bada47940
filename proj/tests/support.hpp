#ifndef DFSIM_TESTS_SUPPORT_HPP
#define DFSIM_TESTS_SUPPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dfsim/elaborate.hpp"
#include "dfsim/oracle.hpp"

namespace dfsim::test {

inline std::string corpus_path(const std::string& name) { return std::string(DFSIM_CORPUS_DIR) + "/" + name + ".od"; }

inline ElaboratedDesign corpus(const std::string& name, bool prune = true) {
    return elaborate(load_design(corpus_path(name)), prune);
}

inline ElaboratedDesign from_text(const std::string& text, bool prune = true) {
    return elaborate(parse_design(text), prune);
}

inline Depths uniform(const ElaboratedDesign& d, std::int64_t s) { return Depths(d.depths.size(), s); }

// Reference results of the cycle-stepping model with every FIFO at `depth`.
struct Expected {
    const char* design;
    std::int64_t depth;
    Status status;
    std::int64_t total_cycles;
    std::map<std::string, std::int64_t> outputs;
};

inline const std::vector<Expected>& reference_table() {
    static const std::vector<Expected> table = {
        {"branch", 1, Status::Ok, 1028, {{"executed", 160}, {"redirects", 20}, {"squashed", 40}}},
        {"branch", 2, Status::Ok, 1008, {{"executed", 140}, {"redirects", 20}, {"squashed", 60}}},
        {"branch", 3, Status::Ok, 988, {{"executed", 120}, {"redirects", 20}, {"squashed", 80}}},
        {"branch", 8, Status::Ok, 909, {{"executed", 50}, {"redirects", 17}, {"squashed", 150}}},
        {"deadlock", 1, Status::Deadlock, 0, {}},
        {"deadlock", 2, Status::Deadlock, 0, {}},
        {"deadlock", 3, Status::Deadlock, 0, {}},
        {"deadlock", 8, Status::Deadlock, 0, {}},
        {"ex1", 1, Status::Ok, 261, {{"sum", 780256}}},
        {"ex1", 2, Status::Ok, 261, {{"sum", 780256}}},
        {"ex1", 3, Status::Ok, 261, {{"sum", 780256}}},
        {"ex1", 8, Status::Ok, 261, {{"sum", 780256}}},
        {"ex2", 1, Status::Ok, 261, {{"total", 2016}}},
        {"ex2", 2, Status::Ok, 262, {{"total", 2016}}},
        {"ex2", 3, Status::Ok, 261, {{"total", 2016}}},
        {"ex2", 8, Status::Ok, 262, {{"total", 2016}}},
        {"ex3", 1, Status::Ok, 451, {{"sum", 4032}}},
        {"ex3", 2, Status::Ok, 451, {{"sum", 4032}}},
        {"ex3", 3, Status::Ok, 451, {{"sum", 4032}}},
        {"ex3", 8, Status::Ok, 451, {{"sum", 4032}}},
        {"ex4a", 1, Status::Ok, 77, {{"checksum", 352}, {"received", 12}}},
        {"ex4a", 2, Status::Ok, 83, {{"checksum", 353}, {"received", 13}}},
        {"ex4a", 3, Status::Ok, 89, {{"checksum", 356}, {"received", 14}}},
        {"ex4a", 8, Status::Ok, 119, {{"checksum", 387}, {"received", 19}}},
        {"ex4a_d", 1, Status::Ok, 75, {{"checksum", 279}, {"received", 10}}},
        {"ex4a_d", 2, Status::Ok, 75, {{"checksum", 221}, {"received", 10}}},
        {"ex4a_d", 3, Status::Ok, 75, {{"checksum", 171}, {"received", 10}}},
        {"ex4a_d", 8, Status::Ok, 75, {{"checksum", 46}, {"received", 10}}},
        {"ex4b", 1, Status::Ok, 134, {{"checksum", 781}, {"dropped", 38}, {"sent", 26}}},
        {"ex4b", 2, Status::Ok, 139, {{"checksum", 783}, {"dropped", 37}, {"sent", 27}}},
        {"ex4b", 3, Status::Ok, 144, {{"checksum", 786}, {"dropped", 36}, {"sent", 28}}},
        {"ex4b", 8, Status::Ok, 169, {{"checksum", 828}, {"dropped", 31}, {"sent", 33}}},
        {"ex4b_d", 1, Status::Ok, 137, {{"checksum", 567}, {"dropped", 45}, {"sent", 19}}},
        {"ex4b_d", 2, Status::Ok, 139, {{"checksum", 568}, {"dropped", 44}, {"sent", 20}}},
        {"ex4b_d", 3, Status::Ok, 141, {{"checksum", 571}, {"dropped", 43}, {"sent", 21}}},
        {"ex4b_d", 8, Status::Ok, 151, {{"checksum", 606}, {"dropped", 38}, {"sent", 26}}},
        {"ex5", 1, Status::Ok, 6088, {{"n1", 553}, {"n2", 1472}, {"s1", 277729512}, {"s2", 46275448}}},
        {"ex5", 2, Status::Ok, 6099, {{"n1", 554}, {"n2", 1471}, {"s1", 277819704}, {"s2", 46275348}}},
        {"ex5", 3, Status::Ok, 6110, {{"n1", 555}, {"n2", 1470}, {"s1", 278388673}, {"s2", 46275217}}},
        {"ex5", 8, Status::Ok, 6165, {{"n1", 560}, {"n2", 1465}, {"s1", 280809028}, {"s2", 46273942}}},
        {"fig5_bottom", 1, Status::Ok, 5, {{"first", 1}, {"second", 2}}},
        {"fig5_bottom", 2, Status::Ok, 4, {{"first", 1}, {"second", 2}}},
        {"fig5_bottom", 3, Status::Ok, 4, {{"first", 1}, {"second", 2}}},
        {"fig5_bottom", 8, Status::Ok, 4, {{"first", 1}, {"second", 2}}},
        {"fig5_top", 1, Status::Ok, 5, {{"first", 1}, {"second", 2}}},
        {"fig5_top", 2, Status::Ok, 5, {{"first", 1}, {"second", 2}}},
        {"fig5_top", 3, Status::Ok, 5, {{"first", 1}, {"second", 2}}},
        {"fig5_top", 8, Status::Ok, 5, {{"first", 1}, {"second", 2}}},
        {"multicore", 1, Status::Ok, 1175, {{"executed", 1048}, {"squashed", 192}}},
        {"multicore", 2, Status::Ok, 1139, {{"executed", 952}, {"squashed", 288}}},
        {"multicore", 3, Status::Ok, 1103, {{"executed", 857}, {"squashed", 383}}},
        {"multicore", 8, Status::Ok, 979, {{"executed", 422}, {"squashed", 818}}},
        {"timer", 1, Status::Ok, 108, {{"elapsed", 51}, {"result", 328350}}},
        {"timer", 2, Status::Ok, 108, {{"elapsed", 51}, {"result", 328350}}},
        {"timer", 3, Status::Ok, 108, {{"elapsed", 51}, {"result", 328350}}},
        {"timer", 8, Status::Ok, 108, {{"elapsed", 51}, {"result", 328350}}},
    };
    return table;
}

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names = {"branch", "deadlock", "ex1", "ex2", "ex3", "ex4a", "ex4a_d",
                                                   "ex4b", "ex4b_d", "ex5", "fig5_bottom", "fig5_top",
                                                   "multicore", "timer"};
    return names;
}

}  // namespace dfsim::test

#endif  // DFSIM_TESTS_SUPPORT_HPP
