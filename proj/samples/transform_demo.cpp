// Walks "Mary saw a cat" through unfolding, every operation, linearization
// and a few sampled transformations.

#include <iostream>

#include "deptx/deptx.hpp"

int main() {
  const char* conllu =
      "# sent_id = t_cat\n"
      "1\tMary\tMary\tPROPN\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tsaw\tsee\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\ta\ta\tDET\t_\t_\t4\tdet\t_\t_\n"
      "4\tcat\tcat\tNOUN\t_\t_\t2\tobj\t_\t_\n\n";
  const auto tree = deptx::parse_conllu(std::string_view(conllu)).front();

  std::cout << "unfolded: " << deptx::to_sexpr(deptx::unfold(tree)) << "\n\n";

  for (auto op : deptx::kAllOperations) {
    deptx::EdgewiseTransform t{{"obj", op}};
    std::cout << deptx::name(op) << ": " << deptx::apply_transformation(tree, t) << '\n';
  }

  deptx::EdgewiseTransform both{{"nsubj", deptx::Operation::kBracket5},
                                {"obj", deptx::Operation::kBracket5}};
  std::cout << "nsubj+obj bracket-5: " << deptx::apply_transformation(tree, both) << "\n\n";

  std::cout << "linearized: " << deptx::linearize_dep_tree(tree) << "\n\n";

  deptx::GenConfig cfg;
  cfg.seed = 7;
  cfg.set_relations({"nsubj", "obj", "det", "nmod", "amod", "advmod"});
  auto rng = deptx::RandomStream::split(cfg.seed, 0);
  for (int k = 0; k < 3; ++k) {
    auto t = deptx::sample_transformation(tree, rng, cfg);
    std::cout << deptx::join(deptx::serialize_prefix(t)) << "  ->  "
              << deptx::apply_transformation(tree, t) << '\n';
  }
}
