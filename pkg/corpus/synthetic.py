"""
Order-free synthetic playlists for desk-scale experiments.

Each playlist belongs to one of ``n_topics`` latent topics. Its tracks are
drawn from that topic's pool, except that a ``noise_rate`` share comes from a
pool shared by all topics. The title is a 4-6 word phrase fixed by the topic,
and track order is a random permutation, so position carries no signal.
Every generated playlist passes the default phrase-level filter.
"""
import numpy as np

from .records import Playlist

MOODS = ["late", "night", "calm", "sunny", "rainy", "dreamy", "lively", "mellow", "bright",
         "smooth", "gentle", "moody", "warm", "fresh", "quiet", "stylish", "sensual", "romantic",
         "cozy", "groovy"]
GENRES = ["jazz", "soul", "indie", "disco", "techno", "house", "piano", "acoustic", "ballad",
          "hiphop", "lofi", "swing", "blues", "funk", "reggae", "trance", "ambient", "metal",
          "opera", "samba"]
PLACES = ["cafe", "drive", "study", "workout", "morning", "autumn", "beach", "rooftop",
          "subway", "kitchen", "office", "garden", "winter", "weekend", "party", "sunset",
          "evening", "train", "library", "holiday"]
FILLERS = ["music", "songs", "tunes", "vibes", "tracks", "mixes"]


def topic_title(k):
    words = [MOODS[k % len(MOODS)], GENRES[(3 * k + 1) % len(GENRES)],
             PLACES[(7 * k + 2) % len(PLACES)], FILLERS[k % len(FILLERS)]]
    extra = k % 3
    if extra >= 1:
        words.insert(0, MOODS[(k + 5) % len(MOODS)])
    if extra == 2:
        words.append("playlist")
    return " ".join(words)


def make_order_free_corpus(n_playlists=2000, n_topics=20, tracks_per_topic=60, shared_tracks=200,
                           min_tracks=12, max_tracks=40, noise_rate=0.2, seed=0):
    rng = np.random.default_rng(seed)
    playlists = []
    for i in range(n_playlists):
        topic = int(rng.integers(n_topics))
        n = int(rng.integers(min_tracks, max_tracks + 1))
        noisy = rng.random(n) < noise_rate
        own = rng.choice(tracks_per_topic, size=n, replace=n > tracks_per_topic)
        shared = rng.integers(shared_tracks, size=n)
        tracks = [f"s{shared[j]:04d}" if noisy[j] else f"t{topic:02d}_{own[j]:03d}" for j in range(n)]
        tracks = [tracks[j] for j in rng.permutation(n)]
        playlists.append(Playlist(id=f"syn{i:05d}", title=topic_title(topic), tracks=tracks))
    return playlists
