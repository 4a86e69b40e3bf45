"""Random graphs and profiles shared by the property tests."""
import random

import networkx as nx

from rumorsim.graph import SocialGraph, UserProfile
from rumorsim.similarity import TopicSet

VOCABULARY = [f'topic{i}' for i in range(30)]


def random_topics(rnd, max_labels=12, vocabulary=VOCABULARY):
    return TopicSet(rnd.sample(vocabulary, rnd.randint(0, max_labels)))


def random_graph(rnd, n, density):
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rnd.random() < density]
    return SocialGraph(edges, range(n))


def random_profiles(rnd, nodes, vocabulary=VOCABULARY[:8], max_labels=4, created_at=0):
    profiles = {}
    for u in nodes:
        topics = TopicSet(rnd.sample(vocabulary, rnd.randint(1, max_labels)))
        profiles[u] = UserProfile(u, topics, created_at)
    return profiles


def reachable(edges, nodes, initials):
    """Everything reachable from initials over edges, via networkx."""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(nodes)
    digraph.add_edges_from(edges)
    result = set(initials)
    for u in initials:
        result |= nx.descendants(digraph, u)
    return result