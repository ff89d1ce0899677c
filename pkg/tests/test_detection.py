# -*- coding: utf-8 -*-
"""
Test Bubble Detection
=====================

"""

import dataclasses
import json
import math
import unittest

from hypothesis import given, settings, strategies as st

from nftgraph.common.exceptions import ConfigError
from nftgraph.common.records import Category, NftKey
from nftgraph.detection import (GateMode, Reason, Thresholds, compare_labeled, detect_all, detect_bubbles, detect_tables,
    detection_report, flag_reason, flagged_nfts, passes_gate)
from nftgraph.indicators import NftIndicators, SeriesIndicators, attach_values, compute_indicators
from nftgraph.synthgen import MarketSpec, WashRing, generate

from fixtures import EMOJI_NFT, EMOJI_SERIES, MarketBuilder, ZERO, addr, emoji_ens_market

SERIES = addr(0x7F)
TERRAFORMS = SeriesIndicators(SERIES, 100, 353, 3.53, 10**8, 2*10**21, 2.0e13)
PUMPED = NftIndicators(NftKey(SERIES, 1), 4, 8.1e3, 3.0e12, 3*10**21, 3)
EMOJI = SeriesIndicators(EMOJI_SERIES, 100, 126, 1.26, 10**14, 66*10**29, 6.6e16)
EMOJI_X = NftIndicators(EMOJI_NFT, 4, 2.05e7, 12499.0, 10**19, 2)

class ThresholdsTest(unittest.TestCase):
    def test_defaults(self):
        th = Thresholds()
        self.assertEqual((th.n1, th.n2, th.n3, th.n4, th.n5, th.n6), (1.5, 5e3, 10**18, 1e3, 1e7, 3))

    def test_conversion(self):
        th = Thresholds(n1=2, n3=1e18, n6=4.0)
        self.assertIsInstance(th.n1, float)
        self.assertEqual(th.n3, 10**18)
        self.assertIsInstance(th.n3, int)
        self.assertEqual(th.n6, 4)

    def test_invalid(self):
        for kwargs in ({"n1": -1}, {"n2": "big"}, {"n3": 1.5}, {"n4": float("nan")}, {"n5": True}, {"n6": -2}):
            with self.subTest(**{k: repr(v) for k, v in kwargs.items()}):
                with self.assertRaises(ConfigError):
                    Thresholds(**kwargs)

    def test_to_dict(self):
        d = Thresholds().to_dict()
        self.assertEqual(d["n3"], "1000000000000000000")
        json.dumps(d)

class GateTest(unittest.TestCase):
    def test_modes(self):
        th = Thresholds()
        self.assertTrue(passes_gate(TERRAFORMS, th, GateMode.LITERAL))
        self.assertTrue(passes_gate(TERRAFORMS, th, GateMode.EITHER))
        self.assertFalse(passes_gate(EMOJI, th, GateMode.LITERAL))
        self.assertTrue(passes_gate(EMOJI, th, "either"))

    def test_undefined_hfratio(self):
        quiet = SeriesIndicators(SERIES, 10, 30, 3.0, None, None, None)
        self.assertTrue(passes_gate(quiet, Thresholds(), GateMode.EITHER))
        self.assertFalse(passes_gate(quiet, Thresholds(), GateMode.LITERAL))
        self.assertFalse(passes_gate(quiet._replace(turnover=1.0), Thresholds(), GateMode.EITHER))

    @settings(max_examples=200)
    @given(st.floats(0, 10), st.one_of(st.none(), st.floats(0, 1e5)))
    def test_literal_implies_either(self, turnover, hfratio):
        s = SeriesIndicators(SERIES, 10, 10, turnover, None, None, hfratio)
        if passes_gate(s, Thresholds(), GateMode.LITERAL):
            self.assertTrue(passes_gate(s, Thresholds(), GateMode.EITHER))

class DetectBubblesTest(unittest.TestCase):
    def test_concentrated_p(self):
        for mode in GateMode:
            report = detect_bubbles(TERRAFORMS, [PUMPED], gate_mode=mode)
            self.assertTrue(report.gate_passed)
            self.assertEqual([(f.indicators, f.reason) for f in report.flagged], [(PUMPED, Reason.CONCENTRATED_P)])

    def test_few_transferors(self):
        self.assertEqual(detect_bubbles(EMOJI, [EMOJI_X], gate_mode="literal").flagged, [])
        report = detect_bubbles(EMOJI, [EMOJI_X], gate_mode="either")
        self.assertEqual([f.reason for f in report.flagged], [Reason.FEW_TRANSFERORS])

    def test_below_thresholds(self):
        th = Thresholds()
        cases = [
            PUMPED._replace(volume=10**18 - 1),
            PUMPED._replace(fratio=999.0),
            PUMPED._replace(fratio=None),
            PUMPED._replace(p_value=1e7, transferors=3)]
        for x in cases:
            with self.subTest(x=x):
                self.assertIsNone(flag_reason(x, th))
                self.assertEqual(detect_bubbles(TERRAFORMS, [x]).flagged, [])

    def test_boundaries(self):
        th = Thresholds()
        x = PUMPED._replace(volume=10**18, fratio=1e3, p_value=1e7 - 1)
        self.assertIs(flag_reason(x, th), Reason.CONCENTRATED_P)
        self.assertIs(flag_reason(x._replace(p_value=1e7, transferors=2), th), Reason.FEW_TRANSFERORS)

    def test_gate_failed(self):
        calm = TERRAFORMS._replace(turnover=1.0, hfratio=10.0)
        report = detect_bubbles(calm, [PUMPED])
        self.assertFalse(report.gate_passed)
        self.assertEqual(report.flagged, [])

    def test_foreign_nft(self):
        with self.assertRaises(ValueError):
            detect_bubbles(TERRAFORMS, [EMOJI_X])

    def test_unknown_mode(self):
        with self.assertRaises(ConfigError):
            detect_bubbles(TERRAFORMS, [PUMPED], gate_mode="both")

    def test_sorted_by_token(self):
        xs = [PUMPED._replace(nft=NftKey(SERIES, t)) for t in (9, 2, 5)]
        self.assertEqual([f.indicators.nft.token_id for f in detect_bubbles(TERRAFORMS, xs).flagged], [2, 5, 9])

    @settings(max_examples=100)
    @given(st.floats(0.5, 2.0), st.floats(0.5, 2.0))
    def test_monotonic_thresholds(self, scale_volume, scale_fratio):
        # Raising the value thresholds never flags more NFTs
        xs = [PUMPED._replace(nft=NftKey(SERIES, t), volume=t*10**18, fratio=500.0*t) for t in range(1, 8)]
        low = Thresholds()
        high = Thresholds(n3=int(10**18*max(scale_volume, 1.0)), n4=1e3*max(scale_fratio, 1.0))
        flagged_low = {f.indicators.nft for f in detect_bubbles(TERRAFORMS, xs, low).flagged}
        flagged_high = {f.indicators.nft for f in detect_bubbles(TERRAFORMS, xs, high).flagged}
        self.assertLessEqual(flagged_high, flagged_low)

class MonotonicityTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tables = []
        rings = (WashRing(ring_size=2, nft_count=2), WashRing(ring_size=3, nft_count=2, trades_per_nft=6))
        for seed in (31, 32, 33):
            records, tx_values, _ = generate(MarketSpec(seed=seed, background_trades=600, wash_rings=rings))
            cls.tables.append(compute_indicators(records, attach_values(records, tx_values)))

    def flagged(self, th, mode):
        found = set()
        for series, nfts in self.tables:
            found |= set(flagged_nfts(detect_tables(series, nfts, th, mode)))
        return found

    def gates(self, th, mode):
        return [passes_gate(s, th, mode) for series, _ in self.tables for s in series]

    @settings(max_examples=200, deadline=None)
    @given(
        base=st.builds(Thresholds,
            n1=st.floats(0, 5),
            n2=st.floats(0, 9).map(lambda e: 10**e),
            n3=st.integers(15, 23).map(lambda e: 10**e),
            n4=st.floats(0, 6).map(lambda e: 10**e),
            n5=st.floats(0, 9).map(lambda e: 10**e),
            n6=st.integers(0, 6)),
        name=st.sampled_from(["n1", "n2", "n3", "n4", "n5", "n6"]),
        factor=st.floats(1, 100))
    def test_raised_threshold(self, base, name, factor):
        if name == "n3":
            value = base.n3*math.ceil(factor)
        elif name == "n6":
            value = base.n6 + int(factor)
        else:
            value = getattr(base, name)*factor
        raised = dataclasses.replace(base, **{name: value})
        for mode in GateMode:
            before, after = self.flagged(base, mode), self.flagged(raised, mode)
            if name in ("n5", "n6"):
                self.assertEqual(self.gates(raised, mode), self.gates(base, mode))
                self.assertLessEqual(before, after)
            else:
                self.assertLessEqual(after, before)

    def test_markets_have_flags(self):
        self.assertTrue(self.flagged(Thresholds(), GateMode.EITHER))

class DetectMarketTest(unittest.TestCase):
    def test_emoji_market(self):
        m = emoji_ens_market()
        model = attach_values(m.records, m.tx_values)
        reports = detect_all(m.records, model, {EMOJI_SERIES: Category.ENS})
        self.assertEqual(flagged_nfts(reports), {EMOJI_NFT: Reason.FEW_TRANSFERORS})
        self.assertEqual(reports[0].category, "ens")
        self.assertEqual(flagged_nfts(detect_all(m.records, model, gate_mode=GateMode.LITERAL)), {})

    def test_wash_rings(self):
        rings = (WashRing(ring_size=2, nft_count=1), WashRing(ring_size=3, nft_count=3, trades_per_nft=6))
        records, tx_values, truth = generate(MarketSpec(seed=21, background_trades=600, wash_rings=rings))
        flagged = flagged_nfts(detect_all(records, attach_values(records, tx_values)))
        self.assertEqual(set(flagged), truth.wash_nfts)
        self.assertEqual(set(flagged.values()), {Reason.CONCENTRATED_P})

    def test_no_wash_rings(self):
        records, tx_values, _ = generate(MarketSpec(seed=22))
        self.assertEqual(flagged_nfts(detect_all(records, attach_values(records, tx_values))), {})

    def test_unpriced_market(self):
        m = MarketBuilder()
        for token_id in range(1, 4):
            m.move(ZERO, addr(1), SERIES, token_id, token_id)
        for i in range(20):
            m.move(addr(1 + i % 2), addr(2 - i % 2), SERIES, 1, 100 + i)
        reports = detect_all(m.records, attach_values(m.records, m.tx_values))
        self.assertTrue(reports[0].gate_passed)
        self.assertEqual(flagged_nfts(reports), {})

    def test_tables_match_records(self):
        m = emoji_ens_market()
        model = attach_values(m.records, m.tx_values)
        series, nfts = compute_indicators(m.records, model)
        a = detection_report(detect_tables(series, nfts), Thresholds(), GateMode.EITHER)
        b = detection_report(detect_all(m.records, model), Thresholds(), GateMode.EITHER)
        self.assertEqual(a, b)

    def test_report(self):
        m = emoji_ens_market()
        reports = detect_all(m.records, attach_values(m.records, m.tx_values))
        doc = detection_report(reports, Thresholds(), GateMode.EITHER)
        self.assertEqual(doc["mode"], "either")
        self.assertEqual(doc["flagged"], 1)
        series = doc["series"][0]
        self.assertEqual(series["gate"], {"turnover": 1.26, "hfratio": 6.6e16, "passed": True, "mode": "either"})
        self.assertEqual(series["flagged"][0]["token_id"], "1")
        self.assertEqual(series["flagged"][0]["volume_wei"], str(10**19))
        self.assertEqual(series["flagged"][0]["reason"], "few_transferors")
        self.assertNotIn("category", series)
        json.dumps(doc)

class CompareLabeledTest(unittest.TestCase):
    def population(self):
        wash = [NftIndicators(NftKey(SERIES, t), 5, 700.0 + t, 1e4 + t, 4*10**21, 2) for t in range(1, 4)]
        other = [NftIndicators(NftKey(SERIES, t), 3, 1e6*t, 1.0 + t, 10**16*t, 3) for t in range(4, 12)]
        other.append(NftIndicators(NftKey(SERIES, 12), 1, 0.0, None, 0, 1))
        return wash + other, {x.nft for x in wash}

    def test_signs(self):
        nfts, labels = self.population()
        result = compare_labeled(nfts, labels)
        self.assertEqual((result.labeled_count, result.unlabeled_count), (3, 9))
        self.assertEqual(result.gap_sign, {"volume": 1, "fratio": 1, "p_value": -1})
        self.assertTrue(result.matches_expected())
        self.assertEqual(result.unlabeled["fratio"]["count"], 8)
        self.assertEqual(result.labeled["p_value"]["median"], 702.0)

    def test_identical_populations(self):
        x = NftIndicators(NftKey(SERIES, 1), 2, 10.0, 2.0, 100, 2)
        result = compare_labeled([x, x._replace(nft=NftKey(SERIES, 2))], {NftKey(SERIES, 1)})
        self.assertEqual(result.median_gap, {"volume": 0.0, "fratio": 0.0, "p_value": 0.0})
        self.assertEqual(result.gap_sign, {"volume": 0, "fratio": 0, "p_value": 0})

    def test_empty_side(self):
        nfts, _ = self.population()
        result = compare_labeled(nfts, {NftKey(addr(0x99), 1)})
        self.assertEqual(result.labeled_count, 0)
        self.assertEqual(result.gap_sign, {"volume": None, "fratio": None, "p_value": None})
        self.assertTrue(result.matches_expected())
        json.dumps(result.to_dict())

    def test_synthetic_markets(self):
        for seed in range(1, 6):
            with self.subTest(seed=seed):
                spec = MarketSpec(seed=seed, background_trades=600, wash_rings=(WashRing(ring_size=2, nft_count=4),))
                records, tx_values, truth = generate(spec)
                _, nfts = compute_indicators(records, attach_values(records, tx_values))
                result = compare_labeled(nfts, truth.wash_nfts)
                self.assertEqual(result.labeled_count, 4)
                self.assertEqual(result.gap_sign, {"volume": 1, "fratio": 1, "p_value": -1})
                self.assertTrue(result.matches_expected())

if __name__ == '__main__':
    unittest.main()
