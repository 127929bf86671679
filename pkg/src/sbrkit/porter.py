"""Porter suffix-stripping stemmer.

Implements the classic five-step algorithm in its canonical form,
including the two widely-adopted amendments to step 2 ("bli" -> "ble",
"logi" -> "log"). Input is expected to be a lowercase word; words of two
characters or fewer are returned unchanged.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return True if i == 0 else not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences in the stem."""
    m = 0
    previous_vowel = False
    for i in range(len(stem)):
        consonant = _is_consonant(stem, i)
        if consonant and previous_vowel:
            m += 1
        previous_vowel = not consonant
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    """Consonant-vowel-consonant ending where the final consonant is not w, x or y."""
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _replace_suffix(word: str, rules) -> str:
    """Apply the first rule whose suffix matches.

    Porter semantics: once a suffix matches, its condition decides the
    outcome and no further rule in the step is considered.
    """
    for suffix, replacement, condition in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if condition is None or condition(stem):
                return stem + replacement
            return word
    return word


def _m_positive(stem: str) -> bool:
    return _measure(stem) > 0


def _m_greater_one(stem: str) -> bool:
    return _measure(stem) > 1


_STEP2_RULES = (
    ("ational", "ate", _m_positive),
    ("tional", "tion", _m_positive),
    ("enci", "ence", _m_positive),
    ("anci", "ance", _m_positive),
    ("izer", "ize", _m_positive),
    ("bli", "ble", _m_positive),
    ("alli", "al", _m_positive),
    ("entli", "ent", _m_positive),
    ("eli", "e", _m_positive),
    ("ousli", "ous", _m_positive),
    ("ization", "ize", _m_positive),
    ("ation", "ate", _m_positive),
    ("ator", "ate", _m_positive),
    ("alism", "al", _m_positive),
    ("iveness", "ive", _m_positive),
    ("fulness", "ful", _m_positive),
    ("ousness", "ous", _m_positive),
    ("aliti", "al", _m_positive),
    ("iviti", "ive", _m_positive),
    ("biliti", "ble", _m_positive),
    ("logi", "log", _m_positive),
)

_STEP3_RULES = (
    ("icate", "ic", _m_positive),
    ("ative", "", _m_positive),
    ("alize", "al", _m_positive),
    ("iciti", "ic", _m_positive),
    ("ical", "ic", _m_positive),
    ("ful", "", _m_positive),
    ("ness", "", _m_positive),
)

_STEP4_RULES = (
    ("al", "", _m_greater_one),
    ("ance", "", _m_greater_one),
    ("ence", "", _m_greater_one),
    ("er", "", _m_greater_one),
    ("ic", "", _m_greater_one),
    ("able", "", _m_greater_one),
    ("ible", "", _m_greater_one),
    ("ant", "", _m_greater_one),
    ("ement", "", _m_greater_one),
    ("ment", "", _m_greater_one),
    ("ent", "", _m_greater_one),
    ("ion", "", lambda stem: bool(stem) and stem[-1] in "st" and _m_greater_one(stem)),
    ("ou", "", _m_greater_one),
    ("ism", "", _m_greater_one),
    ("ate", "", _m_greater_one),
    ("iti", "", _m_greater_one),
    ("ous", "", _m_greater_one),
    ("ive", "", _m_greater_one),
    ("ize", "", _m_greater_one),
)


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        return word[:-1] if _measure(word[:-3]) > 0 else word
    if word.endswith("ed"):
        stem = word[:-2]
        if not _has_vowel(stem):
            return word
    elif word.endswith("ing"):
        stem = word[:-3]
        if not _has_vowel(stem):
            return word
    else:
        return word
    # A suffix was removed; tidy up the remaining stem.
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _step5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word: str) -> str:
    if word.endswith("ll") and _measure(word) > 1:
        return word[:-1]
    return word


def porter_stem(token: str) -> str:
    """Return the Porter stem of a lowercase word."""
    if len(token) <= 2:
        return token
    word = _step1a(token)
    word = _step1b(word)
    word = _step1c(word)
    word = _replace_suffix(word, _STEP2_RULES)
    word = _replace_suffix(word, _STEP3_RULES)
    word = _replace_suffix(word, _STEP4_RULES)
    word = _step5a(word)
    word = _step5b(word)
    return word
