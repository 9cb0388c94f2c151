#pragma once

#include <cstdint>
#include <vector>

#include "Types.h"

namespace cherry {

// intrusive links owned by the item (an Edge or a Node record)
struct HeapLinks {
    int32_t first_child = kNullIndex;
    int32_t next_sibling = kNullIndex;
    int32_t prev = kNullIndex;  // parent if first child, else left sibling
    HeapId heap;                // membership handle, resolved through redirects
};

// Arena of two-pass pairing heaps over externally stored items.
// Access must provide:
//   HeapLinks &Links(int32_t item)
//   int64_t Key(int32_t item)        (read lazily at compare time)
//
// Heap records are never reused. Meld records a redirect on the absorbed
// record; memberships stay valid by resolving through redirects with path
// compression (union by root). Removing an item from a retired heap unlinks
// the item's own fields only and leaves the dead structure untouched; retired
// heaps are never queried again.
template <class Access>
class HeapArena {
  public:
    explicit HeapArena(Access access) : access_(access) {}

    HeapId NewHeap() {
        recs_.push_back(Rec{});
        return HeapId(static_cast<int32_t>(recs_.size()) - 1);
    }

    HeapId Resolve(HeapId h) {
        if (!h) {
            return h;
        }
        HeapId root = h;
        while (recs_[root.v].redirect) {
            root = recs_[root.v].redirect;
        }
        while (recs_[h.v].redirect) {
            HeapId next = recs_[h.v].redirect;
            recs_[h.v].redirect = root;
            h = next;
        }
        return root;
    }

    bool IsRetired(HeapId h) { return recs_[Resolve(h).v].retired; }

    bool Empty(HeapId h) { return recs_[Resolve(h).v].root == kNullIndex; }

    // item must not be in any live heap; its links must be clear
    void Insert(HeapId h, int32_t item) {
        h = Resolve(h);
        Rec &rec = recs_[h.v];
        Require(!rec.retired, "insert into retired heap");
        HeapLinks &l = access_.Links(item);
        Require(!l.heap, "insert of an item that has a membership");
        Require(l.first_child == kNullIndex && l.next_sibling == kNullIndex &&
                    l.prev == kNullIndex,
                "insert of an item with dirty links");
        l.heap = h;
        rec.root = rec.root == kNullIndex ? item : Link(rec.root, item);
    }

    // no-op without membership; live-heap delete or dead-heap unlink otherwise
    void Remove(int32_t item) {
        HeapLinks &l = access_.Links(item);
        if (!l.heap) {
            return;
        }
        HeapId h = Resolve(l.heap);
        Rec &rec = recs_[h.v];
        if (rec.retired) {
            ClearLinks(item);
            return;
        }
        if (rec.root == item) {
            PopMin(h);
            return;
        }
        Detach(item);
        int32_t orphan = TwoPassMerge(access_.Links(item).first_child);
        ClearLinks(item);
        if (orphan != kNullIndex) {
            rec.root = rec.root == kNullIndex ? orphan : Link(rec.root, orphan);
        }
    }

    int32_t PeekMin(HeapId h) {
        Rec &rec = recs_[Resolve(h).v];
        Require(!rec.retired, "peek on retired heap");
        return rec.root;
    }

    int32_t PopMin(HeapId h) {
        Rec &rec = recs_[Resolve(h).v];
        Require(!rec.retired, "pop on retired heap");
        int32_t item = rec.root;
        if (item == kNullIndex) {
            return item;
        }
        rec.root = TwoPassMerge(access_.Links(item).first_child);
        if (rec.root != kNullIndex) {
            access_.Links(rec.root).prev = kNullIndex;
        }
        ClearLinks(item);
        return item;
    }

    // absorbs a into b; memberships recorded against a keep resolving
    void Meld(HeapId a, HeapId b) {
        a = Resolve(a);
        b = Resolve(b);
        Require(a != b, "meld of a heap with itself");
        Rec &ra = recs_[a.v];
        Rec &rb = recs_[b.v];
        Require(!ra.retired && !rb.retired, "meld involving a retired heap");
        if (ra.root != kNullIndex) {
            rb.root = rb.root == kNullIndex ? ra.root : Link(rb.root, ra.root);
        }
        ra.root = kNullIndex;
        ra.redirect = b;
    }

    void Retire(HeapId h) {
        Rec &rec = recs_[Resolve(h).v];
        rec.retired = true;
        rec.root = kNullIndex;
    }

    // visits every item with key equal to the root key's `target`; prunes
    // subtrees under any item with a larger key (heap order)
    template <class F>
    void ForEachKeyEq(HeapId h, int64_t target, F &&f) {
        Rec &rec = recs_[Resolve(h).v];
        Require(!rec.retired, "traversal of retired heap");
        if (rec.root == kNullIndex) {
            return;
        }
        scratch_stack_.clear();
        scratch_stack_.push_back(rec.root);
        while (!scratch_stack_.empty()) {
            int32_t item = scratch_stack_.back();
            scratch_stack_.pop_back();
            if (access_.Key(item) > target) {
                continue;
            }
            f(item);
            for (int32_t c = access_.Links(item).first_child; c != kNullIndex;
                 c = access_.Links(c).next_sibling) {
                scratch_stack_.push_back(c);
            }
        }
    }

    // test support: full item list of a live heap, any order
    std::vector<int32_t> CollectItems(HeapId h) {
        std::vector<int32_t> out;
        Rec &rec = recs_[Resolve(h).v];
        Require(!rec.retired, "collect on retired heap");
        if (rec.root == kNullIndex) {
            return out;
        }
        std::vector<int32_t> stack{rec.root};
        while (!stack.empty()) {
            int32_t item = stack.back();
            stack.pop_back();
            out.push_back(item);
            for (int32_t c = access_.Links(item).first_child; c != kNullIndex;
                 c = access_.Links(c).next_sibling) {
                stack.push_back(c);
            }
        }
        return out;
    }

    // test support: heap order + link symmetry + membership of a live heap
    void DebugValidate(HeapId h) {
        h = Resolve(h);
        Rec &rec = recs_[h.v];
        Require(!rec.retired, "validate on retired heap");
        if (rec.root == kNullIndex) {
            return;
        }
        Require(access_.Links(rec.root).prev == kNullIndex, "root has a prev link");
        ValidateSubtree(rec.root, h);
    }

  private:
    struct Rec {
        int32_t root = kNullIndex;
        bool retired = false;
        HeapId redirect;
    };

    void ClearLinks(int32_t item) {
        HeapLinks &l = access_.Links(item);
        l.first_child = kNullIndex;
        l.next_sibling = kNullIndex;
        l.prev = kNullIndex;
        l.heap = HeapId();
    }

    // makes the larger-keyed root the first child of the smaller-keyed one
    int32_t Link(int32_t a, int32_t b) {
        if (access_.Key(b) < access_.Key(a)) {
            std::swap(a, b);
        }
        HeapLinks &la = access_.Links(a);
        HeapLinks &lb = access_.Links(b);
        lb.next_sibling = la.first_child;
        if (la.first_child != kNullIndex) {
            access_.Links(la.first_child).prev = b;
        }
        lb.prev = a;
        la.first_child = b;
        return a;
    }

    // unplugs item's subtree from its sibling list
    void Detach(int32_t item) {
        HeapLinks &l = access_.Links(item);
        int32_t p = l.prev;
        Require(p != kNullIndex, "detach of a root");
        if (access_.Links(p).first_child == item) {
            access_.Links(p).first_child = l.next_sibling;
        } else {
            access_.Links(p).next_sibling = l.next_sibling;
        }
        if (l.next_sibling != kNullIndex) {
            access_.Links(l.next_sibling).prev = p;
        }
        l.prev = kNullIndex;
        l.next_sibling = kNullIndex;
    }

    int32_t TwoPassMerge(int32_t first) {
        if (first == kNullIndex) {
            return kNullIndex;
        }
        scratch_pairs_.clear();
        int32_t cur = first;
        while (cur != kNullIndex) {
            int32_t a = cur;
            int32_t next = access_.Links(a).next_sibling;
            access_.Links(a).next_sibling = kNullIndex;
            access_.Links(a).prev = kNullIndex;
            if (next == kNullIndex) {
                scratch_pairs_.push_back(a);
                break;
            }
            int32_t b = next;
            cur = access_.Links(b).next_sibling;
            access_.Links(b).next_sibling = kNullIndex;
            access_.Links(b).prev = kNullIndex;
            scratch_pairs_.push_back(Link(a, b));
        }
        int32_t acc = scratch_pairs_.back();
        for (size_t i = scratch_pairs_.size() - 1; i-- > 0;) {
            acc = Link(scratch_pairs_[i], acc);
        }
        if (acc != kNullIndex) {
            access_.Links(acc).prev = kNullIndex;
        }
        return acc;
    }

    void ValidateSubtree(int32_t item, HeapId h) {
        Require(Resolve(access_.Links(item).heap) == h, "membership mismatch in heap");
        for (int32_t c = access_.Links(item).first_child; c != kNullIndex;
             c = access_.Links(c).next_sibling) {
            Require(access_.Key(c) >= access_.Key(item), "heap order violated");
            int32_t expect_prev =
                access_.Links(item).first_child == c ? item : PrevSibling(item, c);
            Require(access_.Links(c).prev == expect_prev, "prev link mismatch");
            ValidateSubtree(c, h);
        }
    }

    int32_t PrevSibling(int32_t parent, int32_t child) {
        int32_t c = access_.Links(parent).first_child;
        while (access_.Links(c).next_sibling != child) {
            c = access_.Links(c).next_sibling;
        }
        return c;
    }

    Access access_;
    std::vector<Rec> recs_;
    std::vector<int32_t> scratch_pairs_;
    std::vector<int32_t> scratch_stack_;
};

}  // namespace cherry
