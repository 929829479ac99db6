"""Frozen Spanish stopword list used by the answer scorer.

The list is intentionally short and fixed so that scores stay reproducible
across releases: articles, prepositions, common conjunctions and pronouns,
and frequent ser/estar/haber forms. Domain nouns are never stopwords.
"""

from __future__ import annotations

SPANISH_STOPWORDS: frozenset[str] = frozenset(
    {
        # articles and contractions
        "el", "la", "los", "las", "un", "una", "unos", "unas", "lo", "al", "del",
        # prepositions
        "a", "ante", "con", "contra", "de", "desde", "durante", "en", "entre",
        "hacia", "hasta", "mediante", "para", "por", "según", "sin", "sobre", "tras",
        # conjunctions and frequent adverbs
        "y", "e", "o", "u", "ni", "que", "como", "si", "no", "sí", "ya",
        "muy", "también", "pero", "porque", "cuando", "donde", "más",
        # pronouns and demonstratives
        "se", "su", "sus", "le", "les", "me", "te", "nos",
        "este", "esta", "esto", "estos", "estas", "ese", "esa", "eso",
        # ser / estar / haber forms
        "es", "son", "era", "eran", "fue", "fueron", "ser", "sido",
        "está", "están", "estaba", "estaban", "estar",
        "hay", "ha", "han", "había", "habían", "haber", "he",
    }
)
