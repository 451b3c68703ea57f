import pytest

from transcheck import (
    BlockViolation,
    CapacityError,
    FormatError,
    KindError,
    ParamError,
    PqChecker,
    check_pq_epochs,
    ext,
    gen_valid,
    ins,
    oracle_check,
    pq_finalize,
    pq_pipeline,
    pq_step,
    scan_block,
    stream_of,
)
from helpers import all_transcripts, insext_alphabet


def build_floor_state(universe=9):
    """State with floors [7, 5, 0, ...] in epoch 3, reached by real steps."""
    st = PqChecker(universe=universe, mode="exact", max_epochs=16)
    st.step(ins(7))
    st.step(ins(5))
    st.step(ext(7), epoch_boundary=True)
    st.step(ext(5), epoch_boundary=True)
    return st


class TestEpochAssign:
    def test_examples(self):
        st = build_floor_state()
        assert st.floor_values(4) == [7, 5, 0, 0]
        assert st.epoch_assign(5) == 2
        assert st.epoch_assign(8) == 1
        assert st.epoch_assign(6) == 2
        assert st.epoch_assign(1) == 3

    def test_all_zero_state(self):
        st = PqChecker(universe=4, mode="exact", max_epochs=4)
        for u in range(1, 5):
            assert st.epoch_assign(u) == 1


class TestFloorUpdate:
    def test_raise_one_suffix(self):
        st = build_floor_state()
        st.f_update(6)
        assert st.floor_values(4) == [7, 6, 0, 0]

    def test_below_everything_is_identity(self):
        st = build_floor_state()
        st.f_update(2)
        assert st.floor_values(4) == [7, 5, 0, 0]

    def test_from_all_zero(self):
        st = PqChecker(universe=9, mode="exact", max_epochs=4)
        st.step(ins(9))
        st.new_epoch()
        st.f_update(9)
        assert st.floor_values(2) == [9, 0]


class TestRawEpochForm:
    def test_single_matched_pair(self):
        assert check_pq_epochs([((), (5,)), ((5,), ())], universe=5).ok

    def test_extract_of_never_inserted_value(self):
        verdict = check_pq_epochs([((), (2,)), ((1,), ())], universe=2)
        assert not verdict.ok

    def test_wrong_order_extraction(self):
        verdict = check_pq_epochs(
            [((), (1, 2)), ((2,), ()), ((1,), ())], universe=2
        )
        assert not verdict.ok

    def test_empty_transcript_accepts(self):
        assert check_pq_epochs([], universe=1).ok

    def test_extract_in_first_epoch_rejects(self):
        verdict = check_pq_epochs([((1,), ())], universe=1)
        assert not verdict.ok

    def test_trailing_inserts_reject(self):
        verdict = check_pq_epochs([((), (1,))], universe=1)
        assert not verdict.ok

    def test_descending_extract_run_rejects(self):
        verdict = check_pq_epochs([((), (1, 2)), ((2, 1), ())], universe=2)
        assert not verdict.ok

    def test_mid_epoch_extract_after_insert_raises(self):
        st = PqChecker(universe=3, mode="exact", max_epochs=4)
        pq_step(st, ins(1))
        with pytest.raises(FormatError):
            pq_step(st, ext(1))  # no epoch boundary

    def test_capacity_error(self):
        st = PqChecker(universe=3, mode="exact", max_epochs=1)
        with pytest.raises(CapacityError):
            st.new_epoch()

    def test_kind_error(self):
        from transcheck import ins_head

        st = PqChecker(universe=3, mode="exact", max_epochs=2)
        with pytest.raises(KindError):
            pq_step(st, ins_head(1))

    def test_fp_and_exact_agree_on_epoch_form(self):
        epochs = [((), (1, 3, 3)), ((1,), (2,)), ((2, 3), ()), ((3,), ())]
        for mode in ("exact", "fp"):
            assert check_pq_epochs(epochs, universe=3, mode=mode, max_epochs=4).ok


class TestFinalize:
    def test_finalize_idempotent_verdict(self):
        st = PqChecker(universe=2, mode="fp", max_epochs=4)
        st.step(ins(2))
        st.step(ext(2), epoch_boundary=True)
        v1 = pq_finalize(st)
        v2 = pq_finalize(st)
        assert v1.ok and v1 == v2


def naive_floors(epoch_extracts: list[list[int]], upto: int) -> list[int]:
    """f[k] = max value extracted after epoch k ended, straight from the log."""
    out = []
    for k in range(1, upto + 1):
        later = [v for ep in epoch_extracts[k:] for v in ep]
        out.append(max(later) if later else 0)
    return out


class TestFloorInvariants:
    def test_floors_match_naive_recomputation_and_never_decrease(self):
        for seed in range(40):
            ops = gen_valid("pq", 24, 5, seed=seed)
            blocks = [ops[i : i + 3] for i in range(0, len(ops), 3)]
            st = PqChecker(universe=5, mode="exact", max_epochs=2 * len(blocks))
            epoch_extracts: list[list[int]] = [[]]
            prev_floors = st.floor_values(2 * len(blocks))

            def feed(op):
                st.step(op)
                if op.kind.name == "EXT":
                    epoch_extracts[-1].append(op.value)
                floors = st.floor_values(2 * len(blocks))
                assert floors == naive_floors(epoch_extracts, len(floors))
                assert all(a >= b for a, b in zip(floors, floors[1:]))
                nonlocal prev_floors
                assert all(f >= p for f, p in zip(floors, prev_floors))
                prev_floors = floors

            first = True
            for block in blocks:
                gamma = scan_block(block)
                assert not isinstance(gamma, BlockViolation)
                if not first:
                    st.new_epoch()
                    epoch_extracts.append([])
                first = False
                for v in gamma.extracts:
                    feed(ext(v))
                if gamma.matched_max is not None:
                    feed(ins(gamma.matched_max))
                st.new_epoch()
                epoch_extracts.append([])
                if gamma.matched_max is not None:
                    feed(ext(gamma.matched_max))
                for v in gamma.inserts:
                    feed(ins(v))
            assert st.finalize().ok

    def test_prefix_balance_identity_on_valid_transcripts(self):
        # On valid prefixes: balance(prefix, u) lives entirely in the cell at
        # the assigned epoch, and every earlier epoch has X == Y.
        for seed in range(25):
            ops = gen_valid("pq", 20, 4, seed=seed)
            blocks = [ops[i : i + 4] for i in range(0, len(ops), 4)]
            st = PqChecker(universe=4, mode="exact", max_epochs=2 * len(blocks))
            balances = {u: 0 for u in range(1, 5)}

            def feed(op):
                st.step(op)
                if op.kind.name == "EXT":
                    balances[op.value] -= 1
                else:
                    balances[op.value] += 1
                for u in range(1, 5):
                    b = st.epoch_assign(u)
                    assert balances[u] == st.exact_cell("x", b, u) - st.exact_cell("y", b, u)
                    for k in range(1, b):
                        assert st.exact_cell("x", k, u) == st.exact_cell("y", k, u)

            first = True
            for block in blocks:
                gamma = scan_block(block)
                if not first:
                    st.new_epoch()
                first = False
                for v in gamma.extracts:
                    feed(ext(v))
                if gamma.matched_max is not None:
                    feed(ins(gamma.matched_max))
                st.new_epoch()
                if gamma.matched_max is not None:
                    feed(ext(gamma.matched_max))
                for v in gamma.inserts:
                    feed(ins(v))
            assert st.finalize().ok


class TestPipeline:
    def test_valid_min_order(self):
        assert pq_pipeline(stream_of([ins(1), ins(2), ext(1), ext(2)]), 2).ok

    def test_out_of_order_extraction(self):
        res = pq_pipeline(stream_of([ins(1), ins(2), ext(2), ext(1)]), 2)
        assert not res.ok

    def test_worked_reduction_image_is_member(self):
        ops = [ins(12), ins(10), ext(10), ins(9), ext(9), ext(12)]
        assert pq_pipeline(stream_of(ops), 3).ok

    def test_exhaustive_against_oracle_small(self):
        alphabet = insext_alphabet(2)
        for tup in all_transcripts(alphabet, 6):
            truth = oracle_check(tup, "pq").ok
            for block_length in (1, 2, 3):
                for mode in ("exact", "fp"):
                    got = pq_pipeline(
                        stream_of(list(tup), universe=2),
                        block_length,
                        mode=mode,
                        seed=5,
                    )
                    assert got.ok == truth, (tup, block_length, mode)

    def test_no_false_rejects_in_fp_mode(self):
        for seed in range(30):
            ops = gen_valid("pq", 128, 16, seed=seed)
            for block_length in (5, 12, 128):
                res = pq_pipeline(stream_of(ops), block_length, seed=seed)
                assert res.ok

    def test_stream_length_mismatch_raises(self):
        good = [ins(1), ext(1)]
        with pytest.raises(FormatError):
            pq_pipeline(stream_of(good, declared_length=3), 2)
        with pytest.raises(FormatError):
            pq_pipeline(stream_of(good, declared_length=1), 2)

    def test_needs_declared_length(self):
        stream = stream_of([ins(1), ext(1)])
        stream.declared_length = None
        with pytest.raises(ParamError):
            pq_pipeline(stream, 2)

    def test_rejects_report_positions_for_local_violations(self):
        res = pq_pipeline(stream_of([ins(1), ext(2), ins(1), ext(1)]), 4)
        assert not res.ok and res.position == 2

    def test_peak_cells_reported(self):
        ops = gen_valid("pq", 100, 10, seed=1)
        res = pq_pipeline(stream_of(ops), 10)
        assert res.ok and 0 < res.peak_cells <= 3 * (2 * 10 + 1) + 10 + 9

    def test_error_bound_scales_with_epochs_and_universe(self):
        ops = gen_valid("pq", 16, 4, seed=0)
        res = pq_pipeline(stream_of(ops, universe=4), 4)
        p = 2**61 - 1
        assert res.error_bound == pytest.approx(((8 * 4 - 1) / (p - 1)) ** 2)
