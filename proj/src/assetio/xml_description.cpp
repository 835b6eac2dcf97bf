// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/assetio/description.hpp>
#include <plannerforge/common/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace pt = boost::property_tree;

namespace plannerforge
{

namespace
{

constexpr const char *kAttr = "<xmlattr>";
constexpr int kXacroDepthLimit = 16;

pt::ptree read_document(const std::string &xml, int flags)
{
  std::istringstream in(xml);
  pt::ptree doc;
  try
  {
    pt::read_xml(in, doc, flags);
  }
  catch (const pt::xml_parser_error &e)
  {
    throw Error(ErrorCode::MalformedXml, e.message(), static_cast<int>(e.line()));
  }
  return doc;
}

/// The single top-level element of a document, which must be named `expected`.
const pt::ptree &root_element(const pt::ptree &doc, const std::string &expected)
{
  const pt::ptree *root = nullptr;
  for (const auto &[tag, child] : doc)
  {
    if (tag == "<xmlcomment>")
      continue;
    if (root)
      throw Error(ErrorCode::MalformedXml, "more than one top-level element");
    if (tag != expected)
      throw Error(ErrorCode::MalformedXml, "root element must be <" + expected + ">, found <" + tag + ">");
    root = &child;
  }
  if (!root)
    throw Error(ErrorCode::MalformedXml, "document has no <" + expected + "> element");
  return *root;
}

std::optional<std::string> attribute(const pt::ptree &node, const std::string &name)
{
  const auto attrs = node.get_child_optional(kAttr);
  if (!attrs)
    return std::nullopt;
  const auto value = attrs->get_optional<std::string>(name);
  if (!value)
    return std::nullopt;
  return *value;
}

std::string required_attribute(const pt::ptree &node, const std::string &element, const std::string &name)
{
  auto value = attribute(node, name);
  if (!value)
    throw Error(ErrorCode::MalformedXml, "<" + element + "> is missing attribute '" + name + "'");
  return *value;
}

double parse_real(const std::string &text, const std::string &context)
{
  try
  {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
      ++used;
    if (used != text.size())
      throw std::invalid_argument(text);
    return v;
  }
  catch (const std::exception &)
  {
    throw Error(ErrorCode::MalformedXml, "expected a number for " + context + ", got '" + text + "'");
  }
}

std::vector<double> parse_reals(const std::string &text, std::size_t expected, const std::string &context)
{
  std::istringstream ss(text);
  std::vector<double> out;
  std::string token;
  while (ss >> token)
    out.push_back(parse_real(token, context));
  if (out.size() != expected)
    throw Error(ErrorCode::MalformedXml,
                context + " needs " + std::to_string(expected) + " numbers, got '" + text + "'");
  return out;
}

Eigen::Vector3d parse_vector3(const std::string &text, const std::string &context)
{
  const auto v = parse_reals(text, 3, context);
  return {v[0], v[1], v[2]};
}

Pose parse_origin(const pt::ptree &parent)
{
  const auto origin = parent.get_child_optional("origin");
  if (!origin)
    return Pose::Identity();
  const Eigen::Vector3d xyz = parse_vector3(attribute(*origin, "xyz").value_or("0 0 0"), "origin xyz");
  const Eigen::Vector3d rpy = parse_vector3(attribute(*origin, "rpy").value_or("0 0 0"), "origin rpy");
  return make_pose_xyz_rpy(xyz.x(), xyz.y(), xyz.z(), rpy.x(), rpy.y(), rpy.z());
}

Geometry parse_geometry(const pt::ptree &geometry_node, const std::string &link)
{
  for (const auto &[tag, shape] : geometry_node)
  {
    if (tag == kAttr || tag == "<xmlcomment>")
      continue;
    if (tag == "box")
    {
      const auto size = parse_vector3(required_attribute(shape, tag, "size"), "box size of " + link);
      return make_box(size.x(), size.y(), size.z());
    }
    if (tag == "sphere")
      return make_sphere(parse_real(required_attribute(shape, tag, "radius"), "sphere radius of " + link));
    if (tag == "cylinder")
      return make_cylinder(parse_real(required_attribute(shape, tag, "radius"), "cylinder radius of " + link),
                           parse_real(required_attribute(shape, tag, "length"), "cylinder length of " + link));
    if (tag == "mesh")
    {
      Mesh mesh{required_attribute(shape, tag, "filename")};
      if (auto scale = attribute(shape, "scale"))
        mesh.scale = parse_vector3(*scale, "mesh scale of " + link);
      return mesh;
    }
    throw Error(ErrorCode::UnknownGeometryType, "unknown geometry <" + tag + "> in link '" + link + "'");
  }
  throw Error(ErrorCode::MalformedXml, "empty <geometry> in link '" + link + "'");
}

JointType parse_joint_type(const std::string &type, const std::string &joint)
{
  if (type == "fixed")
    return JointType::Fixed;
  if (type == "revolute")
    return JointType::Revolute;
  if (type == "continuous")
    return JointType::Continuous;
  if (type == "prismatic")
    return JointType::Prismatic;
  throw Error(ErrorCode::UnsupportedJointType, "joint '" + joint + "' has unsupported type '" + type + "'");
}

// --- xacro ------------------------------------------------------------------

bool is_xacro_tag(const std::string &tag)
{
  return tag.rfind("xacro:", 0) == 0;
}

void collect_properties(const pt::ptree &node, std::map<std::string, std::string> &properties)
{
  for (const auto &[tag, child] : node)
  {
    if (tag == kAttr || tag == "<xmlcomment>")
      continue;
    if (tag == "xacro:property")
    {
      const auto name = required_attribute(child, tag, "name");
      const auto value = attribute(child, "value");
      if (!value)
        throw Error(ErrorCode::UnsupportedXacroFeature, "property '" + name + "' must carry a value attribute");
      properties[name] = *value;
      continue;
    }
    if (is_xacro_tag(tag))
      throw Error(ErrorCode::UnsupportedXacroFeature, "<" + tag + "> is not supported");
    collect_properties(child, properties);
  }
}

std::string substitute(std::string value, const std::map<std::string, std::string> &properties)
{
  for (int depth = 0;; ++depth)
  {
    if (value.find("${") == std::string::npos)
      return value;
    if (depth >= kXacroDepthLimit)
      throw Error(ErrorCode::CycleDetected, "property substitution did not settle within 16 rounds");
    std::string out;
    std::size_t pos = 0;
    while (true)
    {
      const auto open = value.find("${", pos);
      if (open == std::string::npos)
      {
        out.append(value, pos, std::string::npos);
        break;
      }
      const auto close = value.find('}', open);
      if (close == std::string::npos)
        throw Error(ErrorCode::UnknownProperty, "unterminated '${' in '" + value + "'");
      const std::string name = value.substr(open + 2, close - open - 2);
      const auto it = properties.find(name);
      if (it == properties.end())
        throw Error(ErrorCode::UnknownProperty, "undefined property '" + name + "'");
      out.append(value, pos, open - pos);
      out += it->second;
      pos = close + 1;
    }
    value = std::move(out);
  }
}

void expand_node(pt::ptree &node, const std::map<std::string, std::string> &properties)
{
  for (auto it = node.begin(); it != node.end();)
  {
    if (it->first == "xacro:property")
    {
      it = node.erase(it);
      continue;
    }
    if (it->first == kAttr)
    {
      for (auto &[name, attr] : it->second)
        attr.data() = substitute(attr.data(), properties);
    }
    else if (it->first != "<xmlcomment>")
      expand_node(it->second, properties);
    ++it;
  }
}

void strip_xacro_namespace(pt::ptree &doc)
{
  for (auto &[tag, child] : doc)
  {
    if (tag == "<xmlcomment>")
      continue;
    if (auto attrs = child.get_child_optional(kAttr))
      attrs->erase("xmlns:xacro");
  }
}

// --- canonical writer -------------------------------------------------------

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt3(const Eigen::Vector3d &v)
{
  return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z());
}

std::string origin_xml(const Pose &pose)
{
  // URDF rpy: R = Rz(y) Ry(p) Rx(r); eulerAngles(2,1,0) returns (y, p, r).
  const Eigen::Vector3d ypr = pose.linear().eulerAngles(2, 1, 0);
  return "<origin xyz=\"" + fmt3(pose.translation()) + "\" rpy=\"" + fmt(ypr[2]) + " " + fmt(ypr[1]) + " " +
         fmt(ypr[0]) + "\"/>";
}

std::string geometry_xml(const Geometry &g)
{
  if (const auto *box = std::get_if<Box>(&g))
    return "<box size=\"" + fmt3(box->size) + "\"/>";
  if (const auto *sphere = std::get_if<Sphere>(&g))
    return "<sphere radius=\"" + fmt(sphere->radius) + "\"/>";
  if (const auto *cyl = std::get_if<Cylinder>(&g))
    return "<cylinder radius=\"" + fmt(cyl->radius) + "\" length=\"" + fmt(cyl->length) + "\"/>";
  const auto &mesh = std::get<Mesh>(g);
  return "<mesh filename=\"" + mesh.filename + "\" scale=\"" + fmt3(mesh.scale) + "\"/>";
}

bool poses_equal(const Pose &a, const Pose &b, double tol)
{
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

std::string to_string(JointType type)
{
  switch (type)
  {
    case JointType::Fixed: return "fixed";
    case JointType::Revolute: return "revolute";
    case JointType::Continuous: return "continuous";
    case JointType::Prismatic: return "prismatic";
  }
  return "fixed";
}

std::string expand_xacro_properties(const std::string &xml)
{
  if (xml.find("xacro") == std::string::npos && xml.find("${") == std::string::npos)
  {
    read_document(xml, 0);  // well-formedness check
    return xml;
  }
  pt::ptree doc = read_document(xml, 0);
  std::map<std::string, std::string> properties;
  collect_properties(doc, properties);
  expand_node(doc, properties);
  strip_xacro_namespace(doc);
  std::ostringstream out;
  pt::write_xml(out, doc);
  return out.str();
}

const UrdfLink *UrdfTree::find_link(const std::string &link) const
{
  for (const auto &l : links)
    if (l.name == link)
      return &l;
  return nullptr;
}

const UrdfJoint *UrdfTree::find_joint(const std::string &joint) const
{
  for (const auto &j : joints)
    if (j.name == joint)
      return &j;
  return nullptr;
}

UrdfTree parse_urdf(const std::string &xml)
{
  const pt::ptree doc = read_document(xml, pt::xml_parser::trim_whitespace);
  const pt::ptree &robot = root_element(doc, "robot");

  UrdfTree tree;
  tree.name = attribute(robot, "name").value_or("");

  std::set<std::string> link_names, joint_names;
  for (const auto &[tag, node] : robot)
  {
    if (tag == "link")
    {
      UrdfLink link;
      link.name = required_attribute(node, tag, "name");
      if (!link_names.insert(link.name).second)
        throw Error(ErrorCode::MalformedXml, "duplicate link '" + link.name + "'");
      for (const auto &[ctag, collision] : node)
      {
        if (ctag != "collision")
          continue;
        const auto geometry = collision.get_child_optional("geometry");
        if (!geometry)
          throw Error(ErrorCode::MalformedXml, "<collision> without <geometry> in link '" + link.name + "'");
        link.collisions.push_back({parse_geometry(*geometry, link.name), parse_origin(collision)});
      }
      tree.links.push_back(std::move(link));
    }
    else if (tag == "joint")
    {
      UrdfJoint joint;
      joint.name = required_attribute(node, tag, "name");
      if (!joint_names.insert(joint.name).second)
        throw Error(ErrorCode::MalformedXml, "duplicate joint '" + joint.name + "'");
      joint.type = parse_joint_type(required_attribute(node, tag, "type"), joint.name);
      if (node.get_child_optional("mimic"))
        throw Error(ErrorCode::UnsupportedJointType, "mimic joint '" + joint.name + "' is not supported");
      const auto parent = node.get_child_optional("parent");
      const auto child = node.get_child_optional("child");
      if (!parent || !child)
        throw Error(ErrorCode::MalformedXml, "joint '" + joint.name + "' needs <parent> and <child>");
      joint.parent = required_attribute(*parent, "parent", "link");
      joint.child = required_attribute(*child, "child", "link");
      joint.origin = parse_origin(node);
      if (const auto axis = node.get_child_optional("axis"))
        joint.axis = parse_vector3(attribute(*axis, "xyz").value_or("1 0 0"), "axis of " + joint.name);
      if (joint.axis.norm() < 1e-12)
        throw Error(ErrorCode::MalformedXml, "joint '" + joint.name + "' has a zero axis");
      joint.axis.normalize();
      if (const auto limit = node.get_child_optional("limit"))
      {
        UrdfLimits limits;
        limits.lower = parse_real(attribute(*limit, "lower").value_or("0"), "lower limit of " + joint.name);
        limits.upper = parse_real(attribute(*limit, "upper").value_or("0"), "upper limit of " + joint.name);
        if (auto velocity = attribute(*limit, "velocity"))
          limits.velocity = parse_real(*velocity, "velocity limit of " + joint.name);
        joint.limits = limits;
      }
      else if (joint.type == JointType::Revolute || joint.type == JointType::Prismatic)
        throw Error(ErrorCode::MalformedXml, "joint '" + joint.name + "' requires a <limit> element");
      tree.joints.push_back(std::move(joint));
    }
  }

  // Tree structure: every link has at most one parent, one root, all reachable.
  std::map<std::string, std::string> parent_of;
  std::map<std::string, std::vector<std::string>> children_of;
  for (const auto &joint : tree.joints)
  {
    if (!link_names.count(joint.parent))
      throw Error(ErrorCode::DanglingReference, "joint '" + joint.name + "' names unknown parent '" + joint.parent + "'");
    if (!link_names.count(joint.child))
      throw Error(ErrorCode::DanglingReference, "joint '" + joint.name + "' names unknown child '" + joint.child + "'");
    if (!parent_of.emplace(joint.child, joint.parent).second)
      throw Error(ErrorCode::CyclicTree, "link '" + joint.child + "' has more than one parent joint");
    children_of[joint.parent].push_back(joint.child);
  }
  std::vector<std::string> roots;
  for (const auto &link : tree.links)
    if (!parent_of.count(link.name))
      roots.push_back(link.name);
  if (tree.links.empty())
    throw Error(ErrorCode::MalformedXml, "robot has no links");
  if (roots.empty())
    throw Error(ErrorCode::CyclicTree, "no root link: the joint graph is cyclic");
  if (roots.size() > 1)
    throw Error(ErrorCode::MultipleRoots, "links '" + roots[0] + "' and '" + roots[1] + "' are both roots");
  tree.root = roots.front();

  std::set<std::string> reached{tree.root};
  std::vector<std::string> stack{tree.root};
  while (!stack.empty())
  {
    const std::string link = stack.back();
    stack.pop_back();
    for (const auto &child : children_of[link])
      if (reached.insert(child).second)
        stack.push_back(child);
  }
  if (reached.size() != tree.links.size())
    throw Error(ErrorCode::CyclicTree, "some links are not reachable from root '" + tree.root + "'");
  return tree;
}

std::string to_urdf_xml(const UrdfTree &tree)
{
  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n<robot name=\"" << tree.name << "\">\n";
  for (const auto &link : tree.links)
  {
    out << "  <link name=\"" << link.name << "\">\n";
    for (const auto &c : link.collisions)
      out << "    <collision>" << origin_xml(c.origin) << "<geometry>" << geometry_xml(c.geometry)
          << "</geometry></collision>\n";
    out << "  </link>\n";
  }
  for (const auto &joint : tree.joints)
  {
    out << "  <joint name=\"" << joint.name << "\" type=\"" << to_string(joint.type) << "\">\n"
        << "    <parent link=\"" << joint.parent << "\"/><child link=\"" << joint.child << "\"/>\n"
        << "    " << origin_xml(joint.origin) << "<axis xyz=\"" << fmt3(joint.axis) << "\"/>\n";
    if (joint.limits)
    {
      out << "    <limit lower=\"" << fmt(joint.limits->lower) << "\" upper=\"" << fmt(joint.limits->upper) << "\"";
      if (joint.limits->velocity)
        out << " velocity=\"" << fmt(*joint.limits->velocity) << "\"";
      out << "/>\n";
    }
    out << "  </joint>\n";
  }
  out << "</robot>\n";
  return out.str();
}

bool structurally_equal(const UrdfTree &a, const UrdfTree &b, double tol)
{
  if (a.name != b.name || a.root != b.root || a.links.size() != b.links.size() || a.joints.size() != b.joints.size())
    return false;
  for (std::size_t i = 0; i < a.links.size(); ++i)
  {
    const auto &la = a.links[i];
    const auto &lb = b.links[i];
    if (la.name != lb.name || la.collisions.size() != lb.collisions.size())
      return false;
    for (std::size_t k = 0; k < la.collisions.size(); ++k)
    {
      if (!poses_equal(la.collisions[k].origin, lb.collisions[k].origin, tol))
        return false;
      if (!(la.collisions[k].geometry == lb.collisions[k].geometry))
        return false;
    }
  }
  for (std::size_t i = 0; i < a.joints.size(); ++i)
  {
    const auto &ja = a.joints[i];
    const auto &jb = b.joints[i];
    if (ja.name != jb.name || ja.type != jb.type || ja.parent != jb.parent || ja.child != jb.child)
      return false;
    if (!poses_equal(ja.origin, jb.origin, tol) || (ja.axis - jb.axis).cwiseAbs().maxCoeff() > tol)
      return false;
    if (ja.limits.has_value() != jb.limits.has_value())
      return false;
    if (ja.limits && (ja.limits->lower != jb.limits->lower || ja.limits->upper != jb.limits->upper ||
                      ja.limits->velocity != jb.limits->velocity))
      return false;
  }
  return true;
}

LinkPair make_link_pair(const std::string &a, const std::string &b)
{
  return a < b ? LinkPair{a, b} : LinkPair{b, a};
}

SrdfInfo parse_srdf(const std::string &xml, const UrdfTree &tree)
{
  const pt::ptree doc = read_document(xml, pt::xml_parser::trim_whitespace);
  const pt::ptree &robot = root_element(doc, "robot");

  std::map<std::string, const UrdfJoint *> joint_by_child;
  for (const auto &joint : tree.joints)
    joint_by_child[joint.child] = &joint;

  SrdfInfo info;
  for (const auto &[tag, node] : robot)
  {
    if (tag == "group")
    {
      const std::string group = required_attribute(node, tag, "name");
      std::vector<std::string> joints;
      auto add_joint = [&](const UrdfJoint &joint) {
        if (joint.type == JointType::Fixed)
          return;
        if (std::find(joints.begin(), joints.end(), joint.name) == joints.end())
          joints.push_back(joint.name);
      };
      for (const auto &[ctag, child] : node)
      {
        if (ctag == "joint")
        {
          const std::string name = required_attribute(child, ctag, "name");
          const UrdfJoint *joint = tree.find_joint(name);
          if (!joint)
            throw Error(ErrorCode::DanglingReference, "group '" + group + "' names unknown joint '" + name + "'");
          add_joint(*joint);
        }
        else if (ctag == "chain")
        {
          const std::string base = required_attribute(child, ctag, "base_link");
          const std::string tip = required_attribute(child, ctag, "tip_link");
          if (!tree.find_link(base) || !tree.find_link(tip))
            throw Error(ErrorCode::DanglingReference, "group '" + group + "' chain names unknown link");
          std::vector<const UrdfJoint *> path;
          std::string link = tip;
          while (link != base)
          {
            const auto it = joint_by_child.find(link);
            if (it == joint_by_child.end())
              throw Error(ErrorCode::DanglingReference,
                          "group '" + group + "': '" + tip + "' is not below '" + base + "'");
            path.push_back(it->second);
            link = it->second->parent;
          }
          for (auto it = path.rbegin(); it != path.rend(); ++it)
            add_joint(**it);
        }
      }
      if (joints.empty())
        throw Error(ErrorCode::EmptyGroup, "group '" + group + "' has no actuated joints");
      info.groups[group] = std::move(joints);
    }
    else if (tag == "disable_collisions")
    {
      const std::string a = required_attribute(node, tag, "link1");
      const std::string b = required_attribute(node, tag, "link2");
      for (const auto &link : {a, b})
        if (!tree.find_link(link))
          throw Error(ErrorCode::DanglingReference, "disable_collisions names unknown link '" + link + "'");
      info.disabled_collisions.insert(make_link_pair(a, b));
    }
  }
  return info;
}

}  // namespace plannerforge
