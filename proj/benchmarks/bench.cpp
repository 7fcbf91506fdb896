#include "solsem/harness.hpp"
#include "solsem/layout.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace solsem;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(SOLSEM_FIXTURE_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void BM_Keccak64(benchmark::State& st) {
    Bytes data(64, 0x5a);
    for (auto _ : st) benchmark::DoNotOptimize(keccak256(data));
    st.SetBytesProcessed(static_cast<std::int64_t>(st.iterations()) * 64);
}
BENCHMARK(BM_Keccak64);

void BM_MappingSlot(benchmark::State& st) {
    Word k = 0;
    for (auto _ : st) benchmark::DoNotOptimize(slot_of_map(3, to_bytes32(++k)));
}
BENCHMARK(BM_MappingSlot);

void BM_StructSize(benchmark::State& st) {
    std::vector<StructField> fields;
    for (int i = 0; i < st.range(0); ++i)
        fields.push_back({"f" + std::to_string(i), i % 3 ? SemType::uint(64) : SemType::address()});
    const TypePtr s = SemType::structure("S", fields);
    for (auto _ : st) benchmark::DoNotOptimize(size_of(*s));
}
BENCHMARK(BM_StructSize)->Arg(4)->Arg(64);

void BM_Parse(benchmark::State& st) {
    const std::string src = fixture("dao.sol");
    for (auto _ : st) benchmark::DoNotOptimize(parse(src));
}
BENCHMARK(BM_Parse);

void BM_CoinSend(benchmark::State& st) {
    Harness h(Program::from_source(fixture("coin.sol")));
    h.run(Scenario::parse("deploy c Coin() from S\ntx c.mint(R, 1000000) from S\n"));
    const Address coin = h.handles().at("c");
    ParseOptions po;
    po.hex_literals = true;
    TxRequest tx;
    tx.from = h.resolve_address("R");
    tx.to = coin;
    tx.fn = "send";
    tx.args.push_back(parse_expression("address(" + hex_address(h.resolve_address("R2")) + ")", po));
    tx.args.push_back(parse_expression("1", po));
    for (auto _ : st) benchmark::DoNotOptimize(h.interpreter().transact(tx));
}
BENCHMARK(BM_CoinSend);

void BM_DaoScenario(benchmark::State& st) {
    const auto prog = Program::from_source(fixture("dao.sol"));
    const Scenario s = Scenario::parse(fixture("dao.scn"));
    for (auto _ : st) {
        Harness h(prog);
        h.run(s);
        benchmark::DoNotOptimize(detect_reentrancy(h.interpreter().trace()));
    }
}
BENCHMARK(BM_DaoScenario);

}  // namespace

BENCHMARK_MAIN();
