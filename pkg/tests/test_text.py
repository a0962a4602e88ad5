import itertools
import random
import string

import pytest

from deceptscan.text import (
    DEFAULT_CONFUSABLES,
    DEFAULT_VISUAL_PAIRS,
    ConfusableTable,
    bidi_render,
    has_residue,
    looks_like_domain,
    mangle_distance,
    randomness_score,
    skeleton,
    strip_bidi,
)

from oracles import recursive_mangle

RLO, LRO, PDF = "\u202e", "\u202d", "\u202c"

# ---------------------------------------------------------------------------
# skeleton
# ---------------------------------------------------------------------------


def test_skeleton_cyrillic_e_domain():
    assert skeleton("trust\u0435d-page.com") == "trusted-page.com"


def test_skeleton_cyrillic_shha_scheme():
    assert skeleton("\u04bbttps") == "https"


def test_skeleton_ascii_fixed_point():
    assert skeleton("abc.com") == "abc.com"


def test_skeleton_fullwidth_at():
    assert skeleton("alice\uff20trusted-page.com") == "alice@trusted-page.com"


def test_unmapped_code_point_sets_residue():
    assert has_residue("caf\u00e9")
    assert skeleton("caf\u00e9") == "caf\u00e9"
    assert not has_residue("trust\u0435d")


def test_confusable_table_rejects_non_ascii_replacement():
    with pytest.raises(ValueError):
        ConfusableTable({"\u0435": "\u00e9"})


def test_confusable_table_from_file(tmp_path):
    path = tmp_path / "extra.txt"
    path.write_text("# extra\nU+00E9\te\n", encoding="utf-8")
    table = ConfusableTable.from_file(path, DEFAULT_CONFUSABLES)
    assert skeleton("caf\u00e9", table) == "cafe"
    assert skeleton("trust\u0435d", table) == "trusted"


# ---------------------------------------------------------------------------
# bidi
# ---------------------------------------------------------------------------


def test_bidi_attachment_name():
    r = bidi_render(f"Agenda-{RLO}fdp.exe")
    assert r.displayed == "Agenda-exe.pdf"
    assert r.had_controls and r.control_positions == (7,)


def test_bidi_sender_reversal():
    assert bidi_render(f"{RLO}moc.egap-detsurt@ecila").displayed == "alice@trusted-page.com"


def test_bidi_identity_without_controls():
    r = bidi_render("plain.txt")
    assert r.displayed == "plain.txt" and not r.had_controls


def test_bidi_pop_ends_scope():
    assert bidi_render(f"a{RLO}bc{PDF}d").displayed == "acbd"


def test_bidi_nested_lro_is_atomic_block():
    # the LRO block keeps its order but moves as one unit inside the RLO scope
    assert bidi_render(f"{RLO}ab{LRO}cd{PDF}ef").displayed == "fecdba"


def test_bidi_isolates_are_stripped_and_flagged():
    r = bidi_render("a\u2066b\u2069c")
    assert r.displayed == "abc" and r.had_controls


def test_strip_bidi():
    assert strip_bidi(f"x{RLO}y{PDF}") == "xy"


# ---------------------------------------------------------------------------
# looks_like_domain
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("text,expected", [
    ("trusted-page.com", True),
    ("alice", False),
    ("trusted-page-de-redirection", False),
    ("trust\u0435d-page.com", True),
    ("a.b.co.uk", True),
    ("report.final2", False),
    ("..com", False),
])
def test_looks_like_domain(text, expected):
    assert looks_like_domain(text) is expected


# ---------------------------------------------------------------------------
# mangle distance
# ---------------------------------------------------------------------------

FIXTURE_DOMAINS = [
    "trusted-page.com", "trusted-paqe.com", "trusted-page.net", "very-trusted-page.com",
    "trustedpage.com", "tursted-page.com", "rnalicious-page.com", "malicious-page.com",
]


def test_mangle_single_substitution_example():
    assert mangle_distance("trusted-paqe.com", "trusted-page.com") == 1


def test_mangle_identity():
    assert mangle_distance("trusted-page.com", "trusted-page.com") == 0


@pytest.mark.parametrize("a,b,expected", [
    ("rnalicious", "malicious", 1),   # rn -> m
    ("paypa1", "paypal", 1),          # 1 -> l
    ("g00gle", "google", 2),
    ("trusted-ppage", "trusted-page", 1),  # doubling
    ("tursted", "trusted", 1),        # adjacent swap
])
def test_mangle_edit_classes(a, b, expected):
    assert mangle_distance(a, b) == expected


def test_mangle_matches_recursive_oracle():
    pairs = list(DEFAULT_VISUAL_PAIRS)
    for a, b in itertools.product(FIXTURE_DOMAINS, repeat=2):
        assert mangle_distance(a, b) == recursive_mangle(a, b, pairs), (a, b)


def test_mangle_symmetric_and_triangle():
    d = {(a, b): mangle_distance(a, b) for a, b in itertools.product(FIXTURE_DOMAINS, repeat=2)}
    for a, b in itertools.product(FIXTURE_DOMAINS, repeat=2):
        assert d[a, b] == d[b, a]
    for a, b, c in itertools.product(FIXTURE_DOMAINS, repeat=3):
        assert d[a, c] <= d[a, b] + d[b, c]


# ---------------------------------------------------------------------------
# randomness
# ---------------------------------------------------------------------------

DICTIONARY_WORDS = """
mail account secure login provider service support office meeting agenda invoice payment
report document presentation calendar network project contact message customer security
update system company market business finance travel health school library garden window
station kitchen morning evening weather question answer planet orange silver yellow winter
summer friend family number
""".split()


def test_randomness_example_label():
    assert randomness_score("dzmdk9psqr") >= 0.75


def test_randomness_common_word():
    assert randomness_score("mail") < 0.75


def test_randomness_separates_words_from_random_strings():
    assert len(DICTIONARY_WORDS) == 50
    rng = random.Random(7)
    alphabet = string.ascii_lowercase + string.digits
    noise = ["".join(rng.choice(alphabet) for _ in range(10)) for _ in range(50)]
    assert max(randomness_score(w) for w in DICTIONARY_WORDS) < 0.75
    assert min(randomness_score(s) for s in noise) >= 0.75


def test_randomness_is_monotone_under_appending():
    rng = random.Random(11)
    alphabet = string.ascii_lowercase + string.digits
    for _ in range(300):
        label = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 12)))
        extended = label + rng.choice(alphabet)
        assert randomness_score(extended) >= randomness_score(label)


def test_randomness_bounded():
    for label in ("", "a", "x" * 200, "q9" * 40):
        assert 0.0 <= randomness_score(label) <= 1.0
