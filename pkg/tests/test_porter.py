"""Porter stemmer verification.

The 100 word/stem pairs below were generated in advance by running a
canonical reference implementation of the algorithm (the widely
distributed ANSI-C port) over the word list; they are frozen here as the
oracle. Every stem in the list is additionally a fixed point of the
algorithm.
"""

from sbrkit.porter import porter_stem

REFERENCE_PAIRS = (
    ("caresses", "caress"),
    ("ponies", "poni"),
    ("ties", "ti"),
    ("caress", "caress"),
    ("cats", "cat"),
    ("feed", "feed"),
    ("plastered", "plaster"),
    ("bled", "bled"),
    ("motoring", "motor"),
    ("sing", "sing"),
    ("conflated", "conflat"),
    ("troubled", "troubl"),
    ("sized", "size"),
    ("hopping", "hop"),
    ("tanned", "tan"),
    ("falling", "fall"),
    ("hissing", "hiss"),
    ("fizzed", "fizz"),
    ("failing", "fail"),
    ("filing", "file"),
    ("happy", "happi"),
    ("sky", "sky"),
    ("relational", "relat"),
    ("conditional", "condit"),
    ("rational", "ration"),
    ("valenci", "valenc"),
    ("hesitanci", "hesit"),
    ("digitizer", "digit"),
    ("conformabli", "conform"),
    ("radicalli", "radic"),
    ("differentli", "differ"),
    ("vileli", "vile"),
    ("analogousli", "analog"),
    ("vietnamization", "vietnam"),
    ("predication", "predic"),
    ("operator", "oper"),
    ("feudalism", "feudal"),
    ("hopefulness", "hope"),
    ("formaliti", "formal"),
    ("sensitiviti", "sensit"),
    ("sensibiliti", "sensibl"),
    ("triplicate", "triplic"),
    ("formative", "form"),
    ("formalize", "formal"),
    ("electriciti", "electr"),
    ("electrical", "electr"),
    ("hopeful", "hope"),
    ("goodness", "good"),
    ("revival", "reviv"),
    ("allowance", "allow"),
    ("inference", "infer"),
    ("airliner", "airlin"),
    ("gyroscopic", "gyroscop"),
    ("adjustable", "adjust"),
    ("irritant", "irrit"),
    ("replacement", "replac"),
    ("adjustment", "adjust"),
    ("dependent", "depend"),
    ("adoption", "adopt"),
    ("communism", "commun"),
    ("activate", "activ"),
    ("angulariti", "angular"),
    ("homologous", "homolog"),
    ("effective", "effect"),
    ("bowdlerize", "bowdler"),
    ("probate", "probat"),
    ("rate", "rate"),
    ("vulnerability", "vulner"),
    ("exploitation", "exploit"),
    ("overflowing", "overflow"),
    ("injection", "inject"),
    ("authentication", "authent"),
    ("certificates", "certif"),
    ("crashes", "crash"),
    ("security", "secur"),
    ("buffered", "buffer"),
    ("escalation", "escal"),
    ("sanitizer", "sanit"),
    ("validation", "valid"),
    ("corruption", "corrupt"),
    ("disclosure", "disclosur"),
    ("encryption", "encrypt"),
    ("mitigated", "mitig"),
    ("privileges", "privileg"),
    ("attacker", "attack"),
    ("connection", "connect"),
    ("denial", "denial"),
    ("bypassing", "bypass"),
    ("fuzzing", "fuzz"),
    ("regression", "regress"),
    ("generally", "gener"),
    ("owed", "ow"),
    ("owing", "ow"),
    ("crying", "cry"),
    ("string", "string"),
    ("leaking", "leak"),
    ("overridden", "overridden"),
    ("handling", "handl"),
    ("clicked", "click"),
    ("timeout", "timeout"),
)


def test_reference_pairs_count():
    assert len(REFERENCE_PAIRS) == 100
    assert len({word for word, _ in REFERENCE_PAIRS}) == 100


def test_matches_reference_implementation():
    mismatches = [
        (word, expected, porter_stem(word))
        for word, expected in REFERENCE_PAIRS
        if porter_stem(word) != expected
    ]
    assert mismatches == []


def test_stems_are_fixed_points():
    not_fixed = [
        stem for _, stem in REFERENCE_PAIRS if porter_stem(stem) != stem
    ]
    assert not_fixed == []


def test_spec_trio():
    assert porter_stem("caresses") == "caress"
    assert porter_stem("ponies") == "poni"
    assert porter_stem("run") == "run"


def test_short_words_unchanged():
    for word in ("a", "is", "go", "io"):
        assert porter_stem(word) == word
