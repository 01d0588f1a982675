"""Seeded generators for synthetic datasets used by tests, scripts and the
docs. Nothing here downloads anything; all data is built locally.
"""

import csv
import io

import numpy as np

# Travel-review rating columns in their original order, with the group each
# belongs to in the bundled travel_review.ontology fixture.
TRAVEL_COLUMNS = [
    ("Churches", "Cultural Places"),
    ("Resorts", "Accommodation"),
    ("Beaches", "Natural Place"),
    ("Parks", "Social Place"),
    ("Theatres", "Entertainment"),
    ("Museums", "Cultural Places"),
    ("Mall", "Social Place"),
    ("Zoos", "Social Place"),
    ("restaurants", "Food and Drinks"),
    ("pubs/bars", "Food and Drinks"),
    ("local services", "Services"),
    ("burger/pizza shops", "Food and Drinks"),
    ("Hotels & other lodgings", "Accommodation"),
    ("juice bars", "Food and Drinks"),
    ("art galleries", "Cultural Places"),
    ("dance clubs", "Entertainment"),
    ("swimming pools", "Services"),
    ("gyms", "Services"),
    ("bakeries", "Food and Drinks"),
    ("beauty & spas", "Services"),
    ("cafes", "Food and Drinks"),
    ("viewpoints", "Natural Place"),
    ("monuments", "Cultural Places"),
    ("gardens", "Social Place"),
]

TRAVEL_GROUPS = [
    "Cultural Places",
    "Natural Place",
    "Social Place",
    "Accommodation",
    "Entertainment",
    "Food and Drinks",
    "Services",
]

TRAVEL_SCHEMA = 'column\tuser id\trole=id\n'


def travel_like_csv(n_records: int, seed: int = 0) -> str:
    """A travel-review-shaped CSV: a sequential ``user id`` column plus the
    24 rating columns the bundled ontology binds.

    Records come from four taste archetypes defined over the seven venue
    groups, with per-column noise, clipped into the 0..5 rating range and
    rounded to 2 decimals.
    """
    rng = np.random.default_rng([int(seed), 7])
    n_arch = 4
    profiles = rng.uniform(0.5, 4.5, size=(n_arch, len(TRAVEL_GROUPS)))
    labels = rng.integers(0, n_arch, size=n_records)
    group_idx = [TRAVEL_GROUPS.index(g) for _, g in TRAVEL_COLUMNS]
    base = profiles[labels][:, group_idx]
    ratings = base + rng.normal(0.0, 0.8, size=base.shape)
    ratings = np.clip(ratings, 0.0, 5.0)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["user id"] + [name for name, _ in TRAVEL_COLUMNS])
    for i in range(n_records):
        writer.writerow([i + 1] + [f"{v:.2f}" for v in ratings[i]])
    return buf.getvalue()


def planted_instance(n_records: int = 240, seed: int = 0, noise: float = 0.22):
    """A dataset whose only record-cluster signal lives at the group-mean
    level, drowned at leaf level by independent noise.

    Structure: 12 leaf columns in four groups of three; groups pair up into
    two top concepts (depth-3 ontology). Each record belongs to one of
    three latent clusters; its value in leaf j is the cluster's prototype
    for j's group plus independent N(0, noise) noise, clipped to [0, 1].
    Averaging a group's leaves cancels noise by sqrt(3) while keeping the
    prototypes apart, so cluster structure sharpens as the ontology is
    climbed.

    Returns (csv_text, ontology_text, labels).
    """
    rng = np.random.default_rng([int(seed), 13])
    # prototypes per (cluster, group); rows differ in at least two groups
    prototypes = np.array(
        [
            [0.30, 0.30, 0.70, 0.70],
            [0.70, 0.30, 0.30, 0.30],
            [0.30, 0.70, 0.30, 0.70],
        ]
    )
    n_groups = prototypes.shape[1]
    leaves_per_group = 3
    labels = rng.integers(0, prototypes.shape[0], size=n_records)
    group_of_leaf = np.repeat(np.arange(n_groups), leaves_per_group)
    base = prototypes[labels][:, group_of_leaf]
    values = np.clip(base + rng.normal(0.0, noise, size=base.shape), 0.0, 1.0)

    columns = [f"g{g}_leaf{i}" for g in range(n_groups) for i in range(leaves_per_group)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in values:
        writer.writerow([repr(float(v)) for v in row])

    onto = []
    for g in range(n_groups):
        for i in range(leaves_per_group):
            name = f"g{g}_leaf{i}"
            onto.append(f"concept\t{name}\tlevel=1\tparent=group{g}\tcolumn={name}")
    for g in range(n_groups):
        top = "left" if g < n_groups // 2 else "right"
        onto.append(f"concept\tgroup{g}\tlevel=2\tparent={top}")
    onto.append("concept\tleft\tlevel=3\tparent=ROOT")
    onto.append("concept\tright\tlevel=3\tparent=ROOT")
    return buf.getvalue(), "\n".join(onto) + "\n", labels
