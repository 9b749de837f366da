#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Freezes reference compound scores for the headline golden corpus.

Requires the `vaderSentiment` package (3.3.2). For every candidate headline
the full reference scorer is run with its final 4-decimal rounding disabled.
A headline is kept only if it avoids the rules newsblend does not implement
and an independent re-implementation of the supported subset agrees with the
reference to 1e-12. The first 50 kept headlines are written as
`title<TAB>compound` with 17 significant digits.

Run from outside the package directory, e.g. `python3 tools/scripts/make_sentiment_golden.py`.
"""

import argparse
import math
import shutil
import string
from pathlib import Path

import vaderSentiment.vaderSentiment as vs

CANDIDATES = [
    "Stocks rally as investors cheer strong jobs report",
    "Markets tumble on fears of a global trade war",
    "Tech shares slide after disappointing earnings",
    "Dow posts best week since January",
    "Oil prices fall sharply amid supply glut",
    "Fed signals patience on interest rate hikes",
    "Investors worry about slowing growth in China",
    "Retail sales rise more than expected in March",
    "Apple hits record high on iPhone optimism",
    "Banks report solid profits despite weak trading",
    "Wall Street ends lower as bond yields climb",
    "Consumer confidence falls to lowest level in months",
    "Amazon beats estimates with surging cloud revenue",
    "Tariff threats spark selloff in industrial stocks",
    "Facebook shares plunge amid privacy scandal",
    "Analysts say the rally is not sustainable",
    "Unemployment claims drop to a very low level",
    "Housing market shows signs of slight cooling",
    "Investors are not worried about inflation yet",
    "Strong dollar hurts exporters and multinational earnings",
    "Chipmakers gain on upbeat demand forecast",
    "Energy stocks lead gains as crude rebounds",
    "Volatility returns as traders fear higher rates",
    "Boeing wins huge order from Asian carrier",
    "Tesla misses production targets again",
    "Merger talks collapse and shares sink",
    "Regulators approve the deal without major conditions",
    "Gold steady as investors seek safety",
    "Pharma stocks rally after successful drug trial",
    "Small caps outperform amid optimism about tax cuts",
    "Retailers struggle with weak holiday sales",
    "Economy adds jobs at a healthy pace",
    "The recovery is hardly impressive, economists warn",
    "Earnings season starts on a positive note",
    "Market shrugs off political uncertainty",
    "Copper slumps on fears of weaker demand",
    "Wage growth remains disappointing for workers",
    "Bitcoin crashes as regulators crack down",
    "Investors welcome clarity from the central bank",
    "Shares of the airline soar after upgrade",
    "Manufacturing activity expands at fastest pace in years",
    "Trade deficit widens to a ten-year high",
    "Netflix subscriber growth is really impressive",
    "Futures point to a quiet open on Wall Street",
    "The company did not meet revenue expectations",
    "Stocks are barely changed in light trading",
    "Investors are extremely cautious ahead of earnings",
    "Fund managers remain bullish on emerging markets",
    "Debt concerns weigh heavily on Italian bonds",
    "Automakers face a difficult year, analysts say",
    "Nasdaq closes at a fresh all-time high",
    "Weak guidance drags down software stocks",
    "The outlook is not bad for industrial firms",
    "Consumer spending picks up in a strong sign for growth",
    "Strike threatens to disrupt production at the plant",
    "The central bank never hesitates to act in a crisis",
    "Treasury yields hit their highest level since 2011",
    "Retail investors are increasingly nervous about stocks",
    "Buyback boom supports share prices",
    "Inflation fears ease after soft price data",
    "Lawsuit adds to troubles at the embattled bank",
    "Dividend increase pleases shareholders",
    "Airline stocks hurt by rising fuel costs",
    "Media giant announces layoffs amid restructuring",
    "Jobless rate falls to lowest since 2000",
    "Investors fear a painful correction is coming",
    "Analysts praise the company for its bold strategy",
    "Semiconductor stocks suffer worst day in months",
    "Healthcare shares advance on reform hopes",
    "The merger is a win for both companies",
    "Hedge funds lose money on the surprise rally",
    "Chinese exports beat forecasts despite tariffs",
    "Mortgage rates climb, hurting home buyers",
    "A quiet day for markets with little news",
]

EXCLUDED_WORDS = {"but", "no", "least", "never", "without", "kind"}
IDIOM_WORDS = {"cooking", "hell", "shit", "bomb", "uppers", "downers", "yeah", "dead", "cut", "hand"}


def full_reference(analyzer, text):
    """Reference compound with the final rounding removed."""
    vs.round = lambda x, n=None: x  # shadows the builtin inside the module only
    try:
        return analyzer.polarity_scores(text)["compound"]
    finally:
        del vs.round


def subset_score(lexicon, text):
    tokens = []
    for w in text.split():
        s = w.strip(string.punctuation)
        tokens.append(w if len(s) <= 2 else s)
    low = [t.lower() for t in tokens]
    raw = 0.0
    for i, tok in enumerate(low):
        if tok in vs.BOOSTER_DICT or tok not in lexicon:
            continue
        v = lexicon[tok]
        for back in (1, 2, 3):
            if back > i or low[i - back] in lexicon:
                continue
            prev = low[i - back]
            b = vs.BOOSTER_DICT.get(prev, 0.0)
            if b:
                b = -b if v < 0 else b
                b *= {1: 1.0, 2: 0.95, 3: 0.9}[back]
                v += b
            if prev in vs.NEGATE or "n't" in prev:
                v *= vs.N_SCALAR
        raw += v
    return max(-1.0, min(1.0, raw / math.sqrt(raw * raw + 15.0)))


def uses_excluded_rule(text):
    if "!" in text or "?" in text:
        return True
    words = text.split()
    if any(w.isupper() and len(w) > 1 for w in words):
        return True
    low = {w.strip(string.punctuation).lower() for w in words}
    return bool(low & EXCLUDED_WORDS) or bool(low & IDIOM_WORDS)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="tests/fixtures")
    ap.add_argument("--count", type=int, default=50)
    args = ap.parse_args()

    analyzer = vs.SentimentIntensityAnalyzer()
    kept = []
    for title in CANDIDATES:
        if uses_excluded_rule(title):
            continue
        ref = full_reference(analyzer, title)
        if abs(ref - subset_score(analyzer.lexicon, title)) > 1e-12:
            continue
        kept.append((title, ref))
    if len(kept) < args.count:
        raise SystemExit(f"only {len(kept)} usable headlines, need {args.count}")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "headlines_golden.tsv", "w", newline="\n") as f:
        f.write("title\tcompound\n")
        for title, ref in kept[: args.count]:
            f.write(f"{title}\t{ref:.17g}\n")
    src = Path(vs.__file__).with_name("vader_lexicon.txt")
    shutil.copyfile(src, out / "vader_lexicon.txt")
    print(f"kept {len(kept)} of {len(CANDIDATES)}; wrote {args.count}")


if __name__ == "__main__":
    main()
