#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "genidx/builder.hpp"
#include "genidx/rng.hpp"
#include "oracles.hpp"

using namespace genidx;
using namespace genidx::testing;

TEST_CASE("bulkload produces the textbook three-level shape") {
    Dataset ds = gen_uni_dense(100000);
    BulkloadSpec spec; // 100 leaves x 1000, fanout 10
    std::mt19937_64 rng(7);
    PhysicalIndex idx = bulkload_btree_random(ds, spec, rng);
    CHECK(idx.validate() == std::nullopt);

    IndexShape shape = idx.shape();
    CHECK(shape.nodes == 111); // 100 leaves + 10 inner + 1 root
    CHECK(shape.leaves == 100);
    CHECK(shape.depth == 3);

    CorrectnessOptions opt;
    opt.exhaustive = false;
    CHECK(physically_correct(idx, ds, opt));
}

TEST_CASE("bulkload determinism and physical diversity") {
    Dataset ds = gen_uni_dense(5000);
    BulkloadSpec spec;
    spec.leaf_count = 50;
    spec.leaf_fill = 100;
    spec.fanout = 5;

    SUBCASE("same seed, same structural hash") {
        std::mt19937_64 a(123), b(123);
        CHECK(structural_hash(bulkload_btree_random(ds, spec, a)) ==
              structural_hash(bulkload_btree_random(ds, spec, b)));
    }

    SUBCASE("different seeds usually differ physically, never logically") {
        std::size_t distinct = 0;
        for (int pair = 0; pair < 20; ++pair) {
            std::mt19937_64 a(1000 + pair), b(5000 + pair);
            PhysicalIndex ia = bulkload_btree_random(ds, spec, a);
            PhysicalIndex ib = bulkload_btree_random(ds, spec, b);
            CHECK(ia.shape().nodes == ib.shape().nodes);
            if (structural_hash(ia) != structural_hash(ib)) ++distinct;
        }
        CHECK(distinct >= 19); // 61 nodes of random choices colliding is astronomically rare
    }
}

TEST_CASE("bulkload degenerate and infeasible inputs") {
    SUBCASE("one tuple, one leaf, no inner node") {
        Dataset ds = make_dataset({42});
        BulkloadSpec spec;
        spec.leaf_count = 1;
        spec.leaf_fill = 1;
        std::mt19937_64 rng(1);
        PhysicalIndex idx = bulkload_btree_random(ds, spec, rng);
        CHECK(idx.shape().nodes == 1);
        CHECK(physically_correct(idx, ds));
    }
    SUBCASE("spec too small for the dataset") {
        Dataset ds = gen_uni_dense(1000);
        BulkloadSpec spec;
        spec.leaf_count = 3;
        spec.leaf_fill = 100;
        std::mt19937_64 rng(1);
        CHECK_THROWS_AS(bulkload_btree_random(ds, spec, rng), BuildError);
    }
}

TEST_CASE("single-node baselines") {
    Dataset ds = gen_uni_dense(1000);
    PhysicalIndex hash = build_single_node(ds, DataLayout::Hash, SearchMethod::HashS);
    CHECK(hash.shape().single_hash_node());
    CHECK(physically_correct(hash, ds, {.exhaustive = false, .sample_pairs = 2000, .seed = 4}));
    CHECK_THROWS_AS(build_single_node(gen_uni_dense(101000), DataLayout::Hash,
                                      SearchMethod::HashS),
                    BuildError);
}

TEST_CASE("config round trip: serialize, parse, rebuild, hash-equal") {
    std::mt19937_64 rng(31);
    Dataset ds = gen_skewed(2000, 9);
    BulkloadSpec spec = BulkloadSpec::sized_for(ds.size());
    spec.fanout = 5;
    PhysicalIndex idx = bulkload_btree_random(ds, spec, rng);

    IndexConfig cfg = to_config(idx);
    cfg.meta.dataset_name = ds.name;
    cfg.meta.dataset_fingerprint = ds.fingerprint();
    cfg.meta.origin_size = ds.size();

    IndexConfig parsed = IndexConfig::from_json(cfg.to_json());
    CHECK(parsed.structural_hash() == cfg.structural_hash());
    CHECK(parsed.capacity_limit == cfg.capacity_limit);
    CHECK(parsed.meta.dataset_fingerprint == cfg.meta.dataset_fingerprint);

    /* Rebuilding on the origin dataset reproduces the index exactly. */
    PhysicalIndex rebuilt = build_from_config(parsed, ds);
    CHECK(structural_hash(rebuilt) == structural_hash(idx));
    CHECK(physically_correct(rebuilt, ds, {.exhaustive = false, .sample_pairs = 3000, .seed = 1}));
}

TEST_CASE("config round trip is the identity on random configurations") {
    std::mt19937_64 rng(77);
    Dataset ds = gen_uni_dense(600);
    for (int trial = 0; trial < 40; ++trial) {
        BulkloadSpec spec;
        spec.fanout = 2 + pick_index(rng, 6);
        spec.leaf_count = 2 + pick_index(rng, 40);
        spec.leaf_fill = (ds.size() + spec.leaf_count - 1) / spec.leaf_count;
        PhysicalIndex idx = bulkload_btree_random(ds, spec, rng);
        IndexConfig cfg = to_config(idx);
        IndexConfig reparsed = IndexConfig::from_json(cfg.to_json());
        CHECK(reparsed.structural_hash() == cfg.structural_hash());
        CHECK(cfg.structural_hash() == structural_hash(idx));
    }
}

TEST_CASE("upscaling preserves topology and correctness") {
    /* A config found on a 2K skewed sample, rebuilt on 20K from the same
     * distribution: same node structure, data redistributed by routing. */
    Dataset small = gen_skewed(2000, 400);
    Dataset large = gen_skewed(20000, 400);

    std::mt19937_64 rng(5);
    BulkloadSpec spec = BulkloadSpec::sized_for(small.size());
    PhysicalIndex origin = bulkload_btree_random(small, spec, rng);
    IndexConfig cfg = to_config(origin);
    cfg.meta.origin_size = small.size();
    cfg.meta.dataset_fingerprint = small.fingerprint();

    PhysicalIndex up = build_from_config(cfg, large);
    CHECK(up.shape().nodes == origin.shape().nodes);
    CHECK(up.shape().depth == origin.shape().depth);
    CHECK(up.shape().dt_layouts == origin.shape().dt_layouts);
    CHECK(physically_correct(up, large, {.exhaustive = false, .sample_pairs = 5000, .seed = 2}));
}

TEST_CASE("three-partition hand spec builds correctly") {
    Dataset ds = gen_skewed(10000, 8);
    PhysicalIndex idx = build_three_partition_handspec(ds);
    CHECK(idx.validate() == std::nullopt);
    CHECK(physically_correct(idx, ds, {.exhaustive = false, .sample_pairs = 4000, .seed = 3}));

    /* Root is a sorted array with binary search over two pivots; the outer
     * partitions are hash nodes. */
    const PhysicalNode &root = idx.node(idx.start_nodes().front());
    REQUIRE(root.ri.has_value());
    CHECK(root.ri->layout == DataLayout::SortedCol);
    CHECK(root.ri->search == SearchMethod::BinS);
    CHECK(root.ri->size() == 3);
    IndexShape shape = idx.shape();
    CHECK(shape.dt_layouts[static_cast<std::size_t>(DataLayout::Hash)] == 2);

    /* Point lookups in all three partitions and a range in the middle. */
    ExecScratch scratch;
    CHECK(idx.execute_point(ds.keys[0], scratch) == payload_type{0});
    CHECK(idx.execute_point(ds.keys[5000], scratch) == payload_type{5000});
    CHECK(idx.execute_point(ds.keys[9999], scratch) == payload_type{9999});
    auto lb = idx.execute_lower_bound(ds.keys[3000], ~0ULL, scratch);
    REQUIRE(lb.has_value());
    CHECK(lb->payload == 3000);
}

TEST_CASE("init population is reproducible and all members are correct") {
    Dataset ds = gen_uni_dense(1000);
    BulkloadSpec spec = BulkloadSpec::sized_for(ds.size());
    auto pop1 = init_population(ds, 10, 99, spec);
    auto pop2 = init_population(ds, 10, 99, spec);
    REQUIRE(pop1.size() == 10);
    for (std::size_t i = 0; i < pop1.size(); ++i)
        CHECK(structural_hash(pop1[i]) == structural_hash(pop2[i]));
    CHECK(physically_correct(pop1.front(), ds)); // exhaustive grid on one member
    for (const PhysicalIndex &idx : pop1)
        CHECK(physically_correct(idx, ds, {.exhaustive = false, .sample_pairs = 2000, .seed = 5}));
}

TEST_CASE("build_from_config rejects malformed configs") {
    Dataset ds = gen_uni_dense(100);
    CHECK_THROWS_AS(IndexConfig::from_json("{\"format\":\"nope\"}"), ConfigError);
    CHECK_THROWS_AS(IndexConfig::from_json("not json at all"), ConfigError);

    /* Routing that cannot cover the keys. */
    IndexConfig cfg;
    NodeConfig root;
    root.part = PartitioningFunction(BitSuffix{2});
    NodeConfig::Ri ri;
    ri.entries = {{0, {0}}}; // only bin 0 routed
    root.ri = ri;
    NodeConfig leaf;
    root.children.push_back(leaf);
    cfg.roots.push_back(root);
    CHECK_THROWS_AS(build_from_config(cfg, ds), BuildError);
}
