"""Fetch song lyrics from a lyrics site and keep a small local cache.

Usage:
    python lyrics_scraper.py "Artist" "Song title"
    python lyrics_scraper.py --batch songs.csv --out lyrics/
"""
import argparse
import csv
import hashlib
import json
import logging
import os
import re
import sys
import time
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional
from urllib.parse import quote_plus, urljoin

import requests
from bs4 import BeautifulSoup

LOG = logging.getLogger("lyrics")

BASE_URL = "https://lyrics.example.org"
SEARCH_PATH = "/search"
USER_AGENT = "lyrics-scraper/0.4 (+https://example.org/bot)"
DEFAULT_TIMEOUT = 10.0
MAX_RETRIES = 3
BACKOFF_SECONDS = 1.5
CACHE_DIR = Path(os.environ.get("LYRICS_CACHE", "~/.cache/lyrics")).expanduser()
CACHE_TTL = 7 * 24 * 3600


class ScraperError(Exception):
    """Base class for scraper failures."""


class NotFound(ScraperError):
    pass


class RateLimited(ScraperError):
    def __init__(self, retry_after):
        super().__init__(f"rate limited, retry after {retry_after}s")
        self.retry_after = retry_after


@dataclass
class Song:
    artist: str
    title: str
    url: Optional[str] = None
    lyrics: Optional[str] = None
    tags: List[str] = field(default_factory=list)

    @property
    def key(self):
        return slugify(f"{self.artist}-{self.title}")

    def to_dict(self):
        return {
            "artist": self.artist,
            "title": self.title,
            "url": self.url,
            "lyrics": self.lyrics,
            "tags": list(self.tags),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            artist=data["artist"],
            title=data["title"],
            url=data.get("url"),
            lyrics=data.get("lyrics"),
            tags=list(data.get("tags", [])),
        )


def slugify(text):
    text = unicodedata.normalize("NFKD", text)
    text = text.encode("ascii", "ignore").decode("ascii")
    text = re.sub(r"[^\w\s-]", "", text).strip().lower()
    return re.sub(r"[-\s]+", "-", text)


def normalize_artist(name):
    name = name.strip()
    if name.lower().startswith("the "):
        name = name[4:] + ", The"
    return name


def split_featuring(title):
    match = re.search(r"\s*\((?:feat\.|ft\.|featuring)\s+([^)]+)\)", title, re.I)
    if not match:
        return title, []
    guests = [g.strip() for g in re.split(r",|&| and ", match.group(1)) if g.strip()]
    return title[: match.start()].rstrip(), guests


class Cache:
    def __init__(self, root=CACHE_DIR, ttl=CACHE_TTL):
        self.root = Path(root)
        self.ttl = ttl
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key):
        digest = hashlib.sha1(key.encode("utf-8")).hexdigest()
        return self.root / digest[:2] / f"{digest}.json"

    def get(self, key):
        path = self._path(key)
        if not path.exists():
            return None
        if time.time() - path.stat().st_mtime > self.ttl:
            LOG.debug("cache entry for %s expired", key)
            path.unlink()
            return None
        with path.open(encoding="utf-8") as handle:
            return json.load(handle)

    def put(self, key, value):
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with tmp.open("w", encoding="utf-8") as handle:
            json.dump(value, handle, ensure_ascii=False)
        tmp.replace(path)

    def clear(self):
        removed = 0
        for entry in self.root.glob("*/*.json"):
            entry.unlink()
            removed += 1
        return removed


class Session:
    def __init__(self, timeout=DEFAULT_TIMEOUT, retries=MAX_RETRIES):
        self.http = requests.Session()
        self.http.headers["User-Agent"] = USER_AGENT
        self.timeout = timeout
        self.retries = retries
        self.requests_made = 0

    def get(self, url, params=None):
        attempt = 0
        while True:
            attempt += 1
            self.requests_made += 1
            try:
                response = self.http.get(url, params=params, timeout=self.timeout)
            except requests.ConnectionError as exc:
                if attempt >= self.retries:
                    raise ScraperError(f"cannot reach {url}") from exc
                time.sleep(BACKOFF_SECONDS * attempt)
                continue
            if response.status_code == 429:
                retry_after = int(response.headers.get("Retry-After", "5"))
                if attempt >= self.retries:
                    raise RateLimited(retry_after)
                time.sleep(retry_after)
                continue
            if response.status_code == 404:
                raise NotFound(url)
            response.raise_for_status()
            return response

    def close(self):
        self.http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
        return False


def search_url(artist, title):
    query = quote_plus(f"{artist} {title}")
    return urljoin(BASE_URL, f"{SEARCH_PATH}?q={query}")


def parse_search_results(html):
    soup = BeautifulSoup(html, "html.parser")
    results = []
    for row in soup.select("ul.results li"):
        link = row.find("a", href=True)
        if link is None:
            continue
        artist_tag = row.find("span", class_="artist")
        results.append(
            {
                "title": link.get_text(strip=True),
                "artist": artist_tag.get_text(strip=True) if artist_tag else "",
                "url": urljoin(BASE_URL, link["href"]),
            }
        )
    return results


def score_result(result, artist, title):
    wanted_title = slugify(title)
    wanted_artist = slugify(normalize_artist(artist))
    got_title = slugify(result["title"])
    got_artist = slugify(normalize_artist(result["artist"]))
    score = 0
    if got_title == wanted_title:
        score += 10
    elif wanted_title in got_title:
        score += 4
    if got_artist == wanted_artist:
        score += 6
    elif wanted_artist and wanted_artist in got_artist:
        score += 2
    return score


def best_result(results, artist, title):
    ranked = sorted(results, key=lambda r: score_result(r, artist, title), reverse=True)
    if not ranked or score_result(ranked[0], artist, title) < 10:
        return None
    return ranked[0]


def find_song_url(session, artist, title):
    response = session.get(search_url(artist, title))
    results = parse_search_results(response.text)
    LOG.debug("search for %r / %r returned %d results", artist, title, len(results))
    best = best_result(results, artist, title)
    if best is None:
        raise NotFound(f"{artist} - {title}")
    return best["url"]


def strip_annotations(text):
    text = re.sub(r"\[\d+\]", "", text)
    text = re.sub(r"\{[^}]*\}", "", text)
    return text


def collapse_blank_lines(text):
    out = []
    blank = False
    for line in text.splitlines():
        if line.strip():
            out.append(line.rstrip())
            blank = False
        elif not blank and out:
            out.append("")
            blank = True
    while out and not out[-1]:
        out.pop()
    return "\n".join(out)


def extract_tags(soup):
    tags = []
    for anchor in soup.select("div.song-tags a"):
        label = anchor.get_text(strip=True).lower()
        if label and label not in tags:
            tags.append(label)
    return tags


def extract_credits(soup):
    credits = {}
    table = soup.find("table", class_="credits")
    if table is None:
        return credits
    for row in table.find_all("tr"):
        cells = row.find_all("td")
        if len(cells) != 2:
            continue
        role = cells[0].get_text(strip=True).rstrip(":")
        names = [n.strip() for n in cells[1].get_text().split(",")]
        credits[role] = [n for n in names if n]
    return credits


def word_count(text):
    return len(re.findall(r"[\w']+", text))


def chorus_lines(text, min_repeats=2):
    seen = {}
    for line in text.splitlines():
        key = line.strip().lower()
        if key:
            seen[key] = seen.get(key, 0) + 1
    return [line for line, count in seen.items() if count >= min_repeats]


def summarize(song):
    text = song.lyrics or ""
    return {
        "key": song.key,
        "words": word_count(text),
        "lines": len([l for l in text.splitlines() if l.strip()]),
        "chorus": chorus_lines(text)[:3],
        "tags": song.tags,
    }


def read_batch(path):
    songs = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        missing = {"artist", "title"} - set(reader.fieldnames or [])
        if missing:
            raise ScraperError(f"{path}: missing columns {sorted(missing)}")
        for row in reader:
            artist = (row.get("artist") or "").strip()
            title = (row.get("title") or "").strip()
            if artist and title:
                songs.append(Song(artist=artist, title=title))
    return songs


def write_lyrics(song, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"{song.key}.txt"
    header = f"{song.artist} - {song.title}\n\n"
    target.write_text(header + (song.lyrics or ""), encoding="utf-8")
    return target


def clean_lyrics(raw):
    text = raw.replace("\r\n", "\n")
    text = strip_annotations(text)
    return collapse_blank_lines(text)


def parse_song_page(html):
    soup = BeautifulSoup(html, "html.parser")
    for hidden in soup.select("div.lyrics script, div.lyrics .ad"):
        hidden.decompose()
    html_frag = soup.find("div", class_="lyrics")
    title_tag = soup.find("h1", class_="song-title")
    title = title_tag.get_text(strip=True) if title_tag else ""
    tags = extract_tags(soup)
    credits = extract_credits(soup)
    LOG.debug("parsed page for %r with %d tags", title, len(tags))
    for br in html_frag.find_all("br"):
        br.replace_with("\n")
    raw = html_frag.get_text()
    lyrics = clean_lyrics(raw)
    return {
        "title": title,
        "lyrics": lyrics,
        "tags": tags,
        "credits": credits,
    }


def fetch_lyrics(session, cache, song):
    cached = cache.get(song.key)
    if cached is not None:
        return Song.from_dict(cached)
    song.url = song.url or find_song_url(session, song.artist, song.title)
    page = parse_song_page(session.get(song.url).text)
    song.lyrics = page["lyrics"]
    song.tags = page["tags"]
    cache.put(song.key, song.to_dict())
    return song


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("artist", nargs="?")
    parser.add_argument("title", nargs="?")
    parser.add_argument("--batch", help="CSV file with artist,title columns")
    parser.add_argument("--out", default="lyrics", help="output directory for --batch")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO)
    if args.batch:
        songs = read_batch(args.batch)
    elif args.artist and args.title:
        songs = [Song(artist=args.artist, title=args.title)]
    else:
        parser.error("give an artist and a title, or --batch")
    with Session() as session:
        cache = Cache()
        for song in songs:
            song = fetch_lyrics(session, cache, song)
            if args.batch:
                write_lyrics(song, args.out)
            else:
                print(song.lyrics)
    return 0


if __name__ == "__main__":
    sys.exit(main())
