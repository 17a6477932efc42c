import pytest

from conftest import PHI, PSI
from teichpong.errors import InvalidInputError, OracleRefusedError
from teichpong.mcg import MappingClass
from teichpong.oracle import count_reduced_words, cross_validate, free_check
from teichpong.pingpong import build_certificate, verify_pingpong
from teichpong.serialize import word_report_document

SANOV_A = MappingClass(1, 2, 0, 1)
SANOV_B = MappingClass(1, 0, 2, 1)


class TestCounting:
    def test_closed_form(self):
        assert count_reduced_words(2, 1) == 4
        assert count_reduced_words(2, 2) == 12
        assert count_reduced_words(2, 3) == 36

    def test_enumeration_matches_count(self):
        report = free_check([SANOV_A, SANOV_B], 1, 5)
        assert report.words_checked == sum(count_reduced_words(2, k) for k in range(1, 6))

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            count_reduced_words(0, 1)


class TestFreeCheck:
    def test_elliptic_order_two(self):
        rot = MappingClass(0, -1, 1, 0)
        report = free_check([rot], 1, 2)
        words = [v["word"] for v in report.violations]
        assert "g1 g1" in words
        assert "g1^-1 g1^-1" in words

    def test_sanov_pair_is_free(self):
        report = free_check([SANOV_A, SANOV_B], 1, 8)
        assert report.violations == []
        assert report.words_checked == sum(count_reduced_words(2, k) for k in range(1, 9))

    def test_commuting_pair_commutator_found(self):
        report = free_check([PHI ** 2, PHI ** 3], 1, 4)
        words = [v["word"] for v in report.violations]
        assert "g1 g2 g1^-1 g2^-1" in words

    def test_standard_pair_with_certificate_power(self):
        cert = build_certificate([PHI, PSI])
        verify_pingpong(cert, 1000)
        report = free_check([PHI, PSI], cert.N, 6)
        assert report.violations == []

    def test_deterministic_reports(self):
        a = free_check([PHI ** 2, PHI ** 3], 1, 4)
        b = free_check([PHI ** 2, PHI ** 3], 1, 4)
        assert word_report_document(a) == word_report_document(b)

    def test_budget_marks_incomplete(self):
        report = free_check([SANOV_A, SANOV_B], 1, 10, time_budget=0.0)
        assert report.incomplete

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            free_check([SANOV_A], 0, 3)
        with pytest.raises(InvalidInputError):
            free_check([], 1, 3)


class TestCrossValidate:
    def test_valid_certificate(self):
        cert = build_certificate([PHI, PSI])
        verify_pingpong(cert, 1000)
        assert cross_validate(cert, 6) is True

    def test_paper_mode_refused(self):
        cert = build_certificate([PHI, PSI])
        cert.mode = "paper_formula"
        with pytest.raises(OracleRefusedError):
            cross_validate(cert, 4)

    def test_tampered_power_refused(self):
        cert = build_certificate([PHI, PSI])
        cert.N = 0
        with pytest.raises(InvalidInputError):
            cross_validate(cert, 4)
