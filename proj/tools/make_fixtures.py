#!/usr/bin/env python3
"""Regenerates fixtures/ deterministically. Run from the repository root."""

import json
import os
import random
from datetime import datetime, timedelta, timezone

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")
UTC = timezone.utc


def iso(t):
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def write(path, text):
    path = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def write_json(path, doc):
    write(path, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


# ---- revision history ------------------------------------------------------

def amoc(x):
    """Exact least-squares split, smallest index on ties."""
    n = len(x)
    total = sum(x)
    best_k, best = None, None
    left = 0
    for k in range(1, n):
        left += x[k - 1]
        right = total - left
        gain = (left * left * (n - k) + right * right * k, k * (n - k))
        if best is None or gain[0] * best[1] > best[0] * gain[1]:
            best_k, best = k, gain
    return best_k


def tucson_revisions():
    rng = random.Random(20110108)
    first = datetime(2011, 1, 8, 19, 5, tzinfo=UTC)
    counts = []
    for day in range(1100):
        if day < 369:
            rate = 9 if day < 30 else 5
            c = sum(1 for _ in range(rate * 2) if rng.random() < 0.5)
        else:
            c = 1 if rng.random() < 0.25 else 0
        counts.append(c)
    counts[0] = 40
    assert amoc(counts) == 369, amoc(counts)

    stamps = []
    for day, c in enumerate(counts):
        start = first if day == 0 else datetime(2011, 1, 8, tzinfo=UTC) + timedelta(days=day)
        span = (datetime(2011, 1, 9, tzinfo=UTC) - first).total_seconds() if day == 0 else 86400
        offsets = sorted(rng.randrange(int(span)) for _ in range(c))
        if day == 0 and offsets:
            offsets[0] = 0
        stamps.extend(start + timedelta(seconds=o) for o in offsets)

    cp = datetime(2012, 1, 12, tzinfo=UTC)
    last_before = max(i for i, t in enumerate(stamps) if t <= cp)
    rows = []
    revid = 406_901_233
    for i, t in enumerate(stamps):
        if i == last_before:
            revid = 471_037_980
        elif i > 0:
            revid += 1 + rng.randrange(40_000 if i < last_before else 400_000)
            if i < last_before:
                revid = min(revid, 471_037_980 - (last_before - i))
        rows.append({"revid": revid, "timestamp": iso(t)})
    ids = [r["revid"] for r in rows]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)
    return "".join(json.dumps(r) + "\n" for r in rows)


# ---- pages -----------------------------------------------------------------

PAGE = """<!DOCTYPE html>
<html lang="{lang}"><head><meta charset="utf-8"><title>{title}</title>{meta}</head>
<body>
<header><nav><a href="/">Home</a> <a href="/world/">World</a> <a href="/politics/">Politics</a> <a href="/sports/">Sports</a></nav></header>
<article>
<h1>{title}</h1>
{paragraphs}
</article>
<aside><ul>
{links}
</ul></aside>
<footer><p>Copyright {site}. All rights reserved.</p></footer>
</body></html>
"""


def page(site, title, paragraphs, links, meta="", lang="en"):
    return PAGE.format(
        lang=lang,
        title=title,
        meta=meta,
        site=site,
        paragraphs="\n".join("<p>" + p + "</p>" for p in paragraphs),
        links="\n".join('<li><a href="{}">{}</a></li>'.format(u, t) for u, t in links),
    )


TUCSON_STORIES = [
    ("Gunman shoots congresswoman at Tucson Safeway event",
     ["A gunman opened fire on Saturday morning at a constituent meeting held by Representative Gabrielle Giffords "
      "outside a Safeway supermarket near Tucson, Arizona. Six people were killed and thirteen were wounded.",
      "Giffords was shot in the head at close range and was taken to University Medical Center in critical "
      "condition. Bystanders tackled the shooter as he tried to reload his pistol."]),
    ("Giffords in critical condition after Arizona shooting",
     ["Doctors at University Medical Center said Representative Gabrielle Giffords was responding to commands "
      "after surgery. The bullet passed through the left side of her brain.",
      "Federal Judge John Roll and nine year old Christina-Taylor Green were among the six people killed at the "
      "Safeway shooting in Tucson on Saturday."]),
    ("Suspect in Tucson shooting charged in federal court",
     ["Jared Lee Loughner, 22, was charged with the attempted assassination of a member of Congress and the "
      "killing of a federal judge after the shooting at the Tucson Safeway.",
      "Prosecutors said the suspect had planned the attack on Representative Giffords and had visited the "
      "supermarket before the constituent meeting."]),
    ("Tucson mourns victims of Safeway shooting",
     ["Hundreds gathered at vigils across Tucson to remember the six people killed in the shooting, including "
      "Judge John Roll, Gabe Zimmerman, Dorothy Morris, Dorwan Stoddard, Phyllis Schneck and Christina-Taylor "
      "Green.",
      "Flowers and candles covered the lawn outside University Medical Center where Giffords and other wounded "
      "victims of the shooting were treated."]),
    ("Obama speaks at Tucson memorial for shooting victims",
     ["President Obama told a memorial service at the University of Arizona that the victims of the Tucson "
      "shooting deserved a better public discourse.",
      "He announced that Representative Gabrielle Giffords had opened her eyes for the first time since she was "
      "shot at the Safeway constituent meeting."]),
    ("Heroes who stopped the Tucson gunman",
     ["Retired colonel Bill Badger and Roger Salzgeber tackled the gunman outside the Safeway after he paused "
      "to reload, and Patricia Maisch grabbed a magazine from his hand.",
      "Daniel Hernandez, an intern for Representative Giffords, held pressure on her wound until paramedics "
      "arrived at the shooting scene in Tucson."]),
    ("Giffords moved to Houston rehabilitation hospital",
     ["Representative Gabrielle Giffords left University Medical Center in Tucson and was flown to a "
      "rehabilitation hospital in Houston, two weeks after she was shot in the head.",
      "Doctors said her recovery from the brain injury suffered in the Safeway shooting was remarkable."]),
    ("Judge rules Tucson shooting suspect incompetent for trial",
     ["A federal judge ruled that Jared Lee Loughner, accused in the Tucson shooting that killed six people and "
      "wounded Representative Giffords, was not competent to stand trial.",
      "Psychologists said the suspect suffers from schizophrenia and would be treated at a prison medical "
      "facility in Missouri."]),
    ("Giffords returns to the House floor",
     ["Representative Gabrielle Giffords made a surprise return to the House of Representatives to vote on the "
      "debt ceiling, her first appearance since the Tucson shooting in January.",
      "Colleagues from both parties applauded as the congresswoman, still recovering from her brain injury, "
      "entered the chamber."]),
    ("Tucson shooting suspect to be forcibly medicated",
     ["An appeals court allowed prison doctors to continue giving antipsychotic drugs to Jared Lee Loughner, the "
      "man accused of the Safeway shooting in Tucson.",
      "Prosecutors hope treatment will make the suspect competent to face charges in the killing of six people "
      "and the wounding of Representative Giffords."]),
    ("Tucson marks one year since Safeway shooting",
     ["Bells rang across Tucson on the anniversary of the shooting that killed six people and wounded thirteen, "
      "including Representative Gabrielle Giffords.",
      "Giffords led the Pledge of Allegiance at a candlelight vigil at the University of Arizona, one year after "
      "the Safeway attack."]),
    ("Giffords announces she will resign from Congress",
     ["Representative Gabrielle Giffords said she would resign from Congress to focus on her recovery, a year "
      "after she was shot at the Tucson Safeway constituent meeting.",
      "In a video message, Giffords thanked the people of Arizona and promised to return to public service."]),
]

OFF_TOPIC = [
    ("Weekend weather outlook", "Sunny skies and mild temperatures are expected across the valley this weekend, "
     "with highs near seventy degrees and light winds. Forecasters expect rain to return by Wednesday."),
    ("Basketball team wins home opener", "The home team pulled away in the fourth quarter behind twenty points "
     "from its senior guard, winning the season opener before a sellout crowd at the arena."),
    ("New bakery opens downtown", "A family owned bakery opened on Main Street offering sourdough loaves, "
     "cinnamon rolls and seasonal fruit tarts. The owners plan to add a coffee bar next spring."),
    ("Gardening tips for desert homes", "Drought tolerant plants such as agave, desert marigold and brittlebush "
     "thrive in sandy soil and need little water once established in a sunny garden."),
]

RUSSIAN = ("В Тусоне неизвестный открыл огонь во время встречи конгрессмена с избирателями у супермаркета. "
           "Шесть человек погибли, тринадцать ранены, среди пострадавших член палаты представителей.")


def tucson():
    base = "https://en.wikipedia.org/wiki/2011_Tucson_shooting"
    refs = [
        # (uri, citation text, archive url or None, coins date or None)
        ("http://www.cnn.com/2011/POLITICS/01/08/arizona.shooting/index.html",
         '"Gunman shoots congresswoman at Tucson Safeway event". CNN. January 8, 2011. Retrieved January 9, 2011.',
         "https://web.archive.org/web/20110109041500/http://www.cnn.com/2011/POLITICS/01/08/arizona.shooting/index.html",
         None),
        ("http://www.nytimes.com/2011/01/09/us/politics/09giffords.html",
         '"Giffords in critical condition after Arizona shooting". The New York Times. January 9, 2011.', None, None),
        ("http://www.washingtonpost.com/wp-dyn/content/article/2011/01/10/AR2011011003121.html",
         '"Suspect in Tucson shooting charged in federal court". The Washington Post. January 10, 2011. '
         'Archived from the original on January 14, 2011.', None, None),
        ("http://azstarnet.com/news/local/crime/tucson-mourns-victims/article_11.html",
         '"Tucson mourns victims of Safeway shooting". Arizona Daily Star. Published January 12, 2011.', None, None),
        ("http://www.bbc.co.uk/news/world-us-canada-12141530",
         '"Obama speaks at Tucson memorial for shooting victims". BBC News. 13 January 2011.',
         "https://web.archive.org/web/20110120000000/http://www.bbc.co.uk/news/world-us-canada-12141530", None),
        ("http://abcnews.go.com/US/tucson-shooting-heroes/story?id=12591123",
         '"Heroes who stopped the Tucson gunman". ABC News. Retrieved January 16, 2011.',
         "https://web.archive.org/web/20110301000000/http://abcnews.go.com/US/tucson-shooting-heroes/story?id=12591123",
         None),
        ("http://www.fbi.gov/phoenix/press-releases/2011/tucson-criminal-complaint.pdf",
         '"Criminal complaint" (PDF). Federal Bureau of Investigation. January 9, 2011.', None, None),
        ("http://lenta.ru/news/2011/01/09/giffords/",
         '"Стрельба в Тусоне" (in Russian). Lenta.ru. January 9, 2011.', None, None),
        ("http://www.cnn.com/2011/POLITICS/01/08/arizona.shooting/index.html",
         '"Gunman shoots congresswoman". CNN.', None, None),
        ("http://www.npr.org/2011/01/21/133120187/giffords-moved-to-houston",
         '"Giffords moved to Houston rehabilitation hospital". NPR. January 21, 2011. Retrieved March 2, 2011.',
         None, None),
        ("http://articles.latimes.com/2011/may/25/nation/la-na-loughner-competency-20110526",
         '"Judge rules Tucson shooting suspect incompetent for trial". Los Angeles Times. May 25, 2011.', None, None),
        ("http://www.reuters.com/article/us-giffords-house-vote-idUSTRE7703N120110801",
         '"Giffords returns to the House floor". Reuters. Retrieved August 2, 2011.',
         "https://web.archive.org/web/20110805000000/http://www.reuters.com/article/us-giffords-house-vote-idUSTRE7703N120110801",
         None),
        ("http://www.usatoday.com/news/nation/story/2011-07-12/loughner-medication/49302911/1",
         '"Tucson shooting suspect to be forcibly medicated". USA Today.', None, "2011-07-12"),
        ("http://www.politico.com/news/stories/0112/71210.html",
         '"Tucson marks one year since Safeway shooting". Politico.', None, None),
        ("http://www.guardian.co.uk/world/2012/jan/22/gabrielle-giffords-resign-congress",
         '"Giffords announces she will resign from Congress". The Guardian. 22 January 2012.', None, None),
        ("https://en.wikipedia.org/wiki/Gabrielle_Giffords", "See also the article on the congresswoman.", None, None),
    ]

    items = []
    for i, (uri, text, archive, coins) in enumerate(refs, start=1):
        if uri.startswith("https://en.wikipedia.org/"):
            body = '<a href="/wiki/Gabrielle_Giffords">Gabrielle Giffords</a>. ' + text
        else:
            title_end = text.find('"', 1)
            body = '<cite class="citation news"><a rel="nofollow" class="external text" href="{}">{}</a>{}</cite>'.format(
                uri, text[1:title_end], text[title_end + 1:])
            if archive:
                body += ' <a rel="nofollow" class="external text" href="{}">Archived</a> copy.'.format(archive)
            if coins:
                body += '<span title="ctx_ver=Z39.88-2004&amp;rft.genre=article&amp;rft.date={}" class="Z3988"></span>'.format(coins)
        items.append('<li id="cite_note-{0}"><span class="mw-cite-backlink"><b><a href="#cite_ref-{0}">^</a></b></span> '
                     '<span class="reference-text">{1}</span></li>'.format(i, body))

    wiki = """<!DOCTYPE html>
<html lang="en"><head><meta charset="UTF-8"><title>2011 Tucson shooting - Wikipedia</title>
<script>var wgPageName = "2011_Tucson_shooting";</script></head>
<body>
<div id="mw-navigation"><nav><a href="/wiki/Main_Page">Main page</a> <a href="/wiki/Portal:Current_events">Current events</a></nav></div>
<div id="content">
<h1 id="firstHeading">2011 Tucson shooting</h1>
<div class="hatnote">Not to be confused with other shootings in Tucson.</div>
<table class="infobox vevent">
<tr><th colspan="2">2011 Tucson shooting</th></tr>
<tr><th scope="row">Location</th><td>Casas Adobes, Arizona, U.S.</td></tr>
<tr><th scope="row">Date</th><td>January 8, 2011<br>10:10 a.m. MST (UTC&#8722;07:00)</td></tr>
<tr><th scope="row">Deaths</th><td>6</td></tr>
<tr><th scope="row">Injured</th><td>13 (including Giffords)</td></tr>
</table>
<div id="toc" class="toc"><h2>Contents</h2><ul><li>1 Shooting</li><li>2 Victims</li><li>3 Aftermath</li></ul></div>
<p>On January 8, 2011, a gunman opened fire at a constituent meeting held by United States Representative
Gabrielle Giffords in a Safeway supermarket parking lot near Tucson, Arizona.<sup class="reference"><a href="#cite_note-1">[1]</a></sup>
Six people were killed, including federal District Court Chief Judge John Roll and nine year old Christina-Taylor Green,
and thirteen others were wounded, including Giffords, who was shot in the head.<sup class="reference"><a href="#cite_note-2">[2]</a></sup></p>
<h2><span class="mw-headline">Shooting</span><span class="mw-editsection">[edit]</span></h2>
<p>The gunman fired a semi-automatic pistol into the crowd at the Congress on Your Corner event. Bystanders
subdued him when he stopped to reload, and a woman took a fresh magazine from his hand.<sup class="reference"><a href="#cite_note-6">[6]</a></sup>
Giffords was taken to University Medical Center, where surgeons operated on her brain injury.</p>
<h2><span class="mw-headline">Victims</span><span class="mw-editsection">[edit]</span></h2>
<p>The six people killed were John Roll, Gabe Zimmerman, Dorothy Morris, Dorwan Stoddard, Phyllis Schneck and
Christina-Taylor Green. Vigils were held across Tucson, and President Obama spoke at a memorial service at the
University of Arizona.<sup class="reference"><a href="#cite_note-5">[5]</a></sup></p>
<h2><span class="mw-headline">Aftermath</span><span class="mw-editsection">[edit]</span></h2>
<p>Jared Lee Loughner was charged in federal court with the attempted assassination of a member of Congress and
the killing of a federal judge.<sup class="reference"><a href="#cite_note-3">[3]</a></sup> A judge found him
incompetent to stand trial, and prison doctors treated him with antipsychotic medication. Giffords moved to a
rehabilitation hospital in Houston, returned to the House floor for a debt ceiling vote in August, and announced
her resignation from Congress in January 2012.</p>
<h2><span class="mw-headline">References</span></h2>
<div class="reflist"><ol class="references">
""" + "\n".join(items) + """
</ol></div>
<div id="catlinks" class="catlinks">Categories: <a href="/wiki/Category:2011_murders">2011 murders in the United States</a></div>
</div>
</body></html>
"""
    write("tucson/wiki.html", wiki)
    write("tucson/revisions.jsonl", tucson_revisions())

    # Live pages and archive snapshots for every reference target and a few
    # pages they link to.
    pages = []
    snapshots = []
    archives = ["web.archive.org", "wayback.archive-it.org", "webarchive.loc.gov"]
    story_uris = [r[0] for r in refs[:6]] + [r[0] for r in refs[9:15]]
    cited = ["2011-01-08", "2011-01-09", "2011-01-10", "2011-01-12", "2011-01-13", "2011-01-16",
             "2011-01-21", "2011-05-25", "2011-08-02", "2011-07-12", "2012-01-08", "2012-01-22"]
    rng = random.Random(8)
    follow = []
    for i, uri in enumerate(story_uris):
        title, paragraphs = TUCSON_STORIES[i]
        site = uri.split("/")[2]
        related = "http://{}/related/tucson-{}.html".format(site, i)
        section = "http://{}/section/{}/".format(site, ["weather", "sports", "food", "garden"][i % 4])
        nxt = story_uris[(i + 1) % len(story_uris)]
        links = [(related, "Related coverage"), (section, "More from this section"), (nxt, "Next story"),
                 ("mailto:tips@" + site, "Send a tip")]
        meta = ""
        if i in (1, 4, 8):
            meta = '\n<meta property="article:published_time" content="{}T14:00:00-05:00">'.format(cited[i])
        pages.append({"uri": uri, "body": page(site, title, paragraphs, links, meta)})
        follow.append((related, section, i))

        when = datetime.strptime(cited[i], "%Y-%m-%d").replace(tzinfo=UTC) + timedelta(hours=6 + i)
        if i != 7:  # one story was never archived
            snapshots.append({"uri_r": uri, "datetime": iso(when), "archive_host": archives[i % 3],
                              "body": page(site, title, paragraphs, links, meta)})
        if i % 4 == 0:
            snapshots.append({"uri_r": uri, "datetime": iso(when + timedelta(days=400)),
                              "archive_host": archives[(i + 1) % 3],
                              "body": page(site, title, paragraphs, links, meta)})

    for related, section, i in follow:
        site = related.split("/")[2]
        j = (i + 5) % len(TUCSON_STORIES)
        title, paragraphs = TUCSON_STORIES[j]
        day = datetime.strptime(cited[j], "%Y-%m-%d").replace(tzinfo=UTC) + timedelta(days=1)
        meta = '\n<meta name="date" content="{}">'.format(day.strftime("%Y-%m-%d"))
        body = page(site, "More: " + title, paragraphs[::-1], [(section, "Section")], meta)
        pages.append({"uri": related, "body": body})
        snapshots.append({"uri_r": related, "datetime": iso(day + timedelta(hours=3)),
                          "archive_host": archives[(i + 2) % 3], "body": body})
        otitle, otext = OFF_TOPIC[i % 4]
        obody = page(site, otitle, [otext, otext], [("/", "Home")])
        if not any(p["uri"] == section for p in pages):
            pages.append({"uri": section, "body": obody})
            snapshots.append({"uri_r": section, "datetime": iso(day + timedelta(days=30)),
                              "archive_host": archives[i % 3], "body": obody,
                              "orig_last_modified": iso(day + timedelta(days=29))})

    pages.append({"uri": refs[6][0], "body": "%PDF-1.4 criminal complaint", "content_type": "application/pdf"})
    pages.append({"uri": refs[7][0], "body": page("lenta.ru", "Стрельба в Тусоне", [RUSSIAN], [], lang="ru")})
    write_json("tucson/site.json", {"timegate_host": "timegate.test", "pages": pages, "snapshots": snapshots})

    write_json("tucson/lookup.json", {
        "http://www.politico.com/news/stories/0112/71210.html": "2012-01-08T15:00:00Z",
    })
    common = {"name": "2011 Tucson shooting", "wiki_html": "wiki.html",
              "wiki_base_uri": base, "revisions": "revisions.jsonl",
              "alpha": 0.5, "beta": 0.5, "max_depth": 5, "repeats": 10, "split_fraction": 0.6,
              "rng_seed": 2011, "workers": 1, "idf": "../idf.tsv", "lookup": "lookup.json",
              "fixture": "site.json", "timegate": "http://timegate.test/timegate/",
              "now": "2018-01-15T00:00:00Z"}
    write_json("tucson/config.json", dict(common, mode="live"))
    write_json("tucson/config-archive.json", dict(common, mode="archive"))


def nyc():
    base = "https://en.wikipedia.org/wiki/2017_New_York_City_truck_attack"
    stories = [
        ("http://www.nytimes.com/2017/10/31/nyregion/police-shooting-lower-manhattan.html", "October 31, 2017",
         "Truck driver kills eight on Manhattan bike path",
         "A man drove a rented pickup truck down a crowded bike path along the Hudson River in Lower Manhattan, "
         "killing eight people and injuring eleven before crashing into a school bus."),
        ("http://www.cnn.com/2017/11/01/us/new-york-truck-attack-suspect/index.html", "November 1, 2017",
         "Suspect in Manhattan truck attack charged with terrorism",
         "Federal prosecutors charged the driver of the truck that killed eight people on the Hudson River bike "
         "path with providing material support to a terrorist group."),
        ("http://www.bbc.com/news/world-us-canada-41827477", "1 November 2017",
         "Victims of New York truck attack named",
         "Five friends from Argentina celebrating a school reunion and a Belgian mother were among the eight "
         "people killed when a truck drove down the bike path in Manhattan."),
        ("http://www.nydailynews.com/new-york/manhattan/truck-attack-vigil-article-1.3603231", "November 2, 2017",
         "New Yorkers hold vigil for truck attack victims",
         "Hundreds gathered near the West Side Highway bike path to mourn the eight people killed in the truck "
         "attack in Lower Manhattan."),
        ("http://www.reuters.com/article/us-newyork-attack-idUSKBN1D02LZ", "November 3, 2017",
         "Bike path reopens after Manhattan truck attack",
         "The Hudson River bike path reopened with new concrete barriers after the truck attack that killed eight "
         "people in Lower Manhattan."),
    ]
    items = []
    pages = []
    for i, (uri, date, title, text) in enumerate(stories, start=1):
        items.append('<li id="cite_note-{0}"><span class="reference-text"><cite class="citation news">'
                     '<a rel="nofollow" class="external text" href="{1}">{2}</a>. {3}.</cite></span></li>'
                     .format(i, uri, title, date))
        site = uri.split("/")[2]
        pages.append({"uri": uri, "body": page(site, title, [text, text], [(stories[i % 5][0], "Next")])})
    wiki = """<!DOCTYPE html>
<html lang="en"><head><title>2017 New York City truck attack - Wikipedia</title></head>
<body><div id="content">
<h1 id="firstHeading">2017 New York City truck attack</h1>
<table class="infobox vevent">
<tr><th scope="row">Location</th><td>Lower Manhattan, New York City</td></tr>
<tr><th scope="row">Date</th><td>31 October 2017</td></tr>
<tr><th scope="row">Deaths</th><td>8</td></tr>
</table>
<p>On October 31, 2017, a man drove a rented pickup truck into cyclists and runners on the Hudson River bike
path in Lower Manhattan, killing eight people and injuring eleven. The truck stopped after it collided with a
school bus, and police shot and arrested the driver.</p>
<p>Federal prosecutors charged the driver with terrorism offenses. The victims included five tourists from
Argentina and a visitor from Belgium. The bike path reopened with new barriers.</p>
<h2>References</h2>
<ol class="references">
""" + "\n".join(items) + """
</ol>
</div></body></html>
"""
    write("nyc/wiki.html", wiki)
    write_json("nyc/site.json", {"timegate_host": "timegate.test", "pages": pages, "snapshots": []})
    write_json("nyc/config.json", {
        "name": "2017 New York City truck attack", "wiki_html": "wiki.html", "wiki_base_uri": base,
        "mode": "live", "repeats": 10, "split_fraction": 0.6, "rng_seed": 2017, "max_depth": 2,
        "idf": "../idf.tsv", "fixture": "site.json", "now": "2017-11-10T00:00:00Z"})


def idf():
    rows = {
        "the": 98000, "a": 97000, "of": 96500, "and": 96000, "to": 95000, "in": 94000, "was": 80000,
        "at": 85000, "on": 84000, "for": 83000, "after": 60000, "people": 40000, "said": 70000,
        "killed": 9000, "shooting": 3500, "tucson": 400, "giffords": 150, "safeway": 600, "congresswoman": 900,
        "gunman": 1200, "victims": 5000, "judge": 7000, "federal": 15000, "arizona": 2500, "truck": 6000,
        "attack": 8000, "manhattan": 3000, "bike path": 700, "the shooting": 2500, "of the": 90000,
        "in the": 91000, "weather": 12000, "bakery": 1500,
    }
    lines = ["#corpus_size\t100000"] + ["{}\t{}".format(k, v) for k, v in sorted(rows.items())]
    write("idf.tsv", "\n".join(lines) + "\n")


if __name__ == "__main__":
    tucson()
    nyc()
    idf()
