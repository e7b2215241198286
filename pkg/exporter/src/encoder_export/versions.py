"""Pinned checkpoint identifiers.

One place, committed to the repo, so every exported store can be traced
to an exact model.  Pass --model to override a pin deliberately; results
produced with an override should say so wherever they are reported.
"""

PINNED_MODELS = {
    # mean-pooled NLI-tuned BERT base
    "sbert": "sentence-transformers/bert-base-nli-mean-tokens",
    # the deep-averaging-network variant, not the transformer one
    "use": "https://tfhub.dev/google/universal-sentence-encoder/4",
    # BiLSTM max-pooling model over fastText vectors
    "infersent": "infersent2",
    "laser": "laser2",
    # dim for the hash encoder; no weights involved
    "debug-hash": "64",
}
